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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include "agentkern/common.hpp"
#include "agentkern/types.hpp"

namespace agentkern {

enum class SyscallKind { kLlm, kMemory, kStorage, kTool, kAccess };

enum class LifecycleState { kCreated, kQueued, kExecuting, kSuspended, kDone, kFailed };

std::string_view to_string(SyscallKind k);
std::string_view to_string(LifecycleState s);

/// Legal edges:
///   created -> queued | executing (inline access calls) | failed (rejected)
///   queued -> executing | failed (cancelled)
///   executing -> suspended (llm only) | done | failed
///   suspended -> executing | failed (cancelled or context error)
bool is_legal_transition(SyscallKind kind, LifecycleState from, LifecycleState to);

using SyscallPayload = std::variant<Query, MemoryRequest, StorageRequest, ToolCall, AccessRequest>;

/// A schedulable unit of agent work. Created on the caller's context, owned by
/// whichever scheduler loop currently holds it; the caller only reads the
/// response after the completion signal fires.
class SysCall {
 public:
  SysCall(std::uint64_t call_id, std::int64_t agent_id, std::string agent_name,
          SyscallKind kind, SyscallPayload request, Ticks created_time);

  SysCall(const SysCall&) = delete;
  SysCall& operator=(const SysCall&) = delete;

  std::uint64_t call_id() const noexcept { return call_id_; }
  SyscallKind kind() const noexcept { return kind_; }
  const std::string& agent_name() const noexcept { return agent_name_; }
  const SyscallPayload& request() const noexcept { return request_; }
  Ticks created_time() const noexcept { return created_time_; }

  std::int64_t agent_id() const;
  void set_agent_id(std::int64_t aid);

  LifecycleState status() const;
  /// Throws kTransition on an illegal edge.
  void set_status(LifecycleState next);

  int priority() const;
  void set_priority(int p);

  std::optional<Ticks> time_limit() const;
  void set_time_limit(std::optional<Ticks> limit);

  std::optional<Ticks> start_time() const;
  std::optional<Ticks> end_time() const;
  /// Records the first start; later calls are ignored. Throws kInternal if
  /// t precedes created_time.
  void mark_started(Ticks t);

  /// Stores the response, stamps end_time, moves to final (done or failed) and
  /// fires the completion signal. Requires status executing; a second
  /// completion throws kTransition.
  void complete(Response response, LifecycleState final_state, Ticks end_time);

  /// Fails a call that is queued or suspended (kernel shutdown, context
  /// errors). Same one-shot semantics as complete().
  void cancel(Response response, Ticks end_time);

  bool is_complete() const;
  Response wait() const;
  std::optional<Response> wait_for(std::chrono::milliseconds timeout) const;
  /// Only meaningful after the completion signal.
  std::optional<Response> response() const;

 private:
  void finish_locked(std::unique_lock<std::mutex>& lock, Response response,
                     LifecycleState final_state, Ticks end_time);

  const std::uint64_t call_id_;
  const std::string agent_name_;
  const SyscallKind kind_;
  const SyscallPayload request_;
  const Ticks created_time_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::int64_t agent_id_;
  LifecycleState status_ = LifecycleState::kCreated;
  int priority_ = 0;
  std::optional<Ticks> time_limit_;
  std::optional<Ticks> start_time_;
  std::optional<Ticks> end_time_;
  std::optional<Response> response_;
  bool signalled_ = false;
};

using SysCallPtr = std::shared_ptr<SysCall>;

/// Hands out strictly increasing call ids.
class SyscallIdAllocator {
 public:
  std::uint64_t next() { return next_.fetch_add(1, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> next_{1};
};

SysCallPtr make_syscall(SyscallIdAllocator& ids, std::int64_t agent_id, std::string agent_name,
                        SyscallKind kind, SyscallPayload request, Ticks created_time);

}  // namespace agentkern
