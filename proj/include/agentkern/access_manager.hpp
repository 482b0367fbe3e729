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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

namespace agentkern {

/// Interactive confirmation channel: shows a prompt, returns the user's reply,
/// or nullopt when the channel is closed.
using ConsentChannel = std::function<std::optional<std::string>(const std::string& prompt)>;

/// Reads a reply line from stdin.
ConsentChannel stdin_consent_channel();

enum class NonInteractivePolicy { kDeny, kAllow };

struct AccessConfig {
  std::set<std::string> irreversible_ops{"sto_clear", "mem_clear", "privilege_change"};
  NonInteractivePolicy noninteractive_default = NonInteractivePolicy::kDeny;
};

struct AuditEntry {
  std::int64_t sid = 0;
  std::int64_t tid = 0;
  std::string operation;
  bool access_checked = false;
  bool access_granted = false;
  bool consent_asked = false;
  bool consent_granted = false;
  bool allowed = false;
};

/// Privilege groups (target -> permitted sources) and the confirmation gate
/// for irreversible operations.
class AccessManager {
 public:
  explicit AccessManager(AccessConfig config = {}, ConsentChannel channel = nullptr);

  void register_agent(std::int64_t aid);
  bool is_registered(std::int64_t aid) const;

  /// Puts sid into tid's privilege group. Idempotent; kValidation for
  /// unregistered agents.
  void add_privilege(std::int64_t sid, std::int64_t tid);
  /// True iff sid == tid or sid is in tid's group.
  bool check_access(std::int64_t sid, std::int64_t tid) const;
  /// Asks the channel when interactive, otherwise applies the configured
  /// default. Only an affirmative "yes" (trimmed, any case) grants.
  bool ask_permission(std::int64_t aid, const std::string& operation);

  bool is_irreversible(const std::string& operation) const;
  bool interactive() const { return static_cast<bool>(channel_); }

  /// Gate for an irreversible operation by sid on tid's resources: foreign
  /// targets need check_access, irreversible operations need consent. Every
  /// decision is appended to the audit log.
  bool authorize(std::int64_t sid, std::int64_t tid, const std::string& operation);

  std::vector<AuditEntry> audit_log() const;

 private:
  AccessConfig config_;
  ConsentChannel channel_;
  mutable std::shared_mutex mu_;
  std::set<std::int64_t> agents_;
  std::map<std::int64_t, std::set<std::int64_t>> groups_;
  mutable std::mutex audit_mu_;
  std::vector<AuditEntry> audit_;
};

}  // namespace agentkern
