// Copyright 2026 The agentkern Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agentkern/access_manager.hpp"

#include <iostream>

#include "agentkern/common.hpp"

namespace agentkern {

ConsentChannel stdin_consent_channel() {
  return [](const std::string& prompt) -> std::optional<std::string> {
    std::cout << prompt << "\nConfirm? (yes/no): " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    return line;
  };
}

AccessManager::AccessManager(AccessConfig config, ConsentChannel channel)
    : config_(std::move(config)), channel_(std::move(channel)) {}

void AccessManager::register_agent(std::int64_t aid) {
  std::unique_lock lock(mu_);
  agents_.insert(aid);
}

bool AccessManager::is_registered(std::int64_t aid) const {
  std::shared_lock lock(mu_);
  return agents_.count(aid) != 0;
}

void AccessManager::add_privilege(std::int64_t sid, std::int64_t tid) {
  std::unique_lock lock(mu_);
  for (std::int64_t id : {sid, tid}) {
    if (!agents_.count(id)) {
      throw KernelError(ErrorCode::kValidation, "agent " + std::to_string(id) + " is not registered");
    }
  }
  groups_[tid].insert(sid);
}

bool AccessManager::check_access(std::int64_t sid, std::int64_t tid) const {
  if (sid == tid) return true;
  std::shared_lock lock(mu_);
  auto it = groups_.find(tid);
  return it != groups_.end() && it->second.count(sid) != 0;
}

bool AccessManager::is_irreversible(const std::string& operation) const {
  return config_.irreversible_ops.count(operation) != 0;
}

bool AccessManager::ask_permission(std::int64_t aid, const std::string& operation) {
  if (!channel_) return config_.noninteractive_default == NonInteractivePolicy::kAllow;
  const auto reply = channel_("Agent " + std::to_string(aid) + " requests irreversible operation '" +
                              operation + "'.");
  if (!reply) return false;
  return to_lower_ascii(trim_ascii(*reply)) == "yes";
}

bool AccessManager::authorize(std::int64_t sid, std::int64_t tid, const std::string& operation) {
  AuditEntry entry;
  entry.sid = sid;
  entry.tid = tid;
  entry.operation = operation;
  entry.allowed = true;
  if (sid != tid) {
    entry.access_checked = true;
    entry.access_granted = check_access(sid, tid);
    entry.allowed = entry.access_granted;
  }
  if (entry.allowed && is_irreversible(operation)) {
    entry.consent_asked = true;
    entry.consent_granted = ask_permission(sid, operation);
    entry.allowed = entry.consent_granted;
  }
  std::lock_guard lock(audit_mu_);
  audit_.push_back(entry);
  return entry.allowed;
}

std::vector<AuditEntry> AccessManager::audit_log() const {
  std::lock_guard lock(audit_mu_);
  return audit_;
}

}  // namespace agentkern
