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

#include "agentkern/context_manager.hpp"

namespace agentkern {

std::string_view to_string(SnapshotMode m) {
  return m == SnapshotMode::kText ? "text" : "beam";
}

SnapshotMode parse_snapshot_mode(std::string_view s) {
  if (s == "text") return SnapshotMode::kText;
  if (s == "beam") return SnapshotMode::kBeam;
  throw KernelError(ErrorCode::kConfig, "context.mode must be text or beam, got '" +
                                            std::string(s) + "'");
}

void ContextManager::gen_snapshot(std::uint64_t cid, DecodeSnapshot data) {
  std::lock_guard lock(mu_);
  data.cid = cid;
  contexts_[cid] = std::move(data);
}

std::optional<DecodeSnapshot> ContextManager::gen_restore(std::uint64_t cid) const {
  std::lock_guard lock(mu_);
  auto it = contexts_.find(cid);
  if (it == contexts_.end()) return std::nullopt;
  return it->second;
}

bool ContextManager::check_restore(std::uint64_t cid) const {
  std::lock_guard lock(mu_);
  return contexts_.count(cid) != 0;
}

void ContextManager::clear_restore(std::uint64_t cid) {
  std::lock_guard lock(mu_);
  contexts_.erase(cid);
}

void ContextManager::suspend_generation(std::uint64_t cid, DecodeSnapshot snapshot) {
  if (snapshot.tokens_done > 0 && snapshot.prefill_progress != snapshot.prompt_tokens) {
    throw KernelError(ErrorCode::kContext, "decode started before prefill completed");
  }
  gen_snapshot(cid, std::move(snapshot));
}

std::optional<DecodeSnapshot> ContextManager::resume_generation(std::uint64_t cid,
                                                                std::uint64_t prompt_hash) const {
  auto snap = gen_restore(cid);
  if (snap && snap->prompt_hash != prompt_hash) {
    throw KernelError(ErrorCode::kContext,
                      "snapshot for context " + std::to_string(cid) + " belongs to another prompt");
  }
  return snap;
}

std::size_t ContextManager::size() const {
  std::lock_guard lock(mu_);
  return contexts_.size();
}

}  // namespace agentkern
