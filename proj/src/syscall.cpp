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

#include "agentkern/syscall.hpp"

#include <algorithm>

namespace agentkern {

std::string_view to_string(SyscallKind k) {
  switch (k) {
    case SyscallKind::kLlm: return "llm";
    case SyscallKind::kMemory: return "memory";
    case SyscallKind::kStorage: return "storage";
    case SyscallKind::kTool: return "tool";
    case SyscallKind::kAccess: return "access";
  }
  return "llm";
}

std::string_view to_string(LifecycleState s) {
  switch (s) {
    case LifecycleState::kCreated: return "created";
    case LifecycleState::kQueued: return "queued";
    case LifecycleState::kExecuting: return "executing";
    case LifecycleState::kSuspended: return "suspended";
    case LifecycleState::kDone: return "done";
    case LifecycleState::kFailed: return "failed";
  }
  return "created";
}

bool is_legal_transition(SyscallKind kind, LifecycleState from, LifecycleState to) {
  using S = LifecycleState;
  switch (from) {
    case S::kCreated:
      return to == S::kQueued || to == S::kExecuting || to == S::kFailed;
    case S::kQueued:
      return to == S::kExecuting || to == S::kFailed;
    case S::kExecuting:
      if (to == S::kSuspended) return kind == SyscallKind::kLlm;
      return to == S::kDone || to == S::kFailed;
    case S::kSuspended:
      return to == S::kExecuting || to == S::kFailed;
    case S::kDone:
    case S::kFailed:
      return false;
  }
  return false;
}

SysCall::SysCall(std::uint64_t call_id, std::int64_t agent_id, std::string agent_name,
                 SyscallKind kind, SyscallPayload request, Ticks created_time)
    : call_id_(call_id),
      agent_name_(std::move(agent_name)),
      kind_(kind),
      request_(std::move(request)),
      created_time_(created_time),
      agent_id_(agent_id) {}

std::int64_t SysCall::agent_id() const {
  std::lock_guard lock(mu_);
  return agent_id_;
}

void SysCall::set_agent_id(std::int64_t aid) {
  std::lock_guard lock(mu_);
  agent_id_ = aid;
}

LifecycleState SysCall::status() const {
  std::lock_guard lock(mu_);
  return status_;
}

void SysCall::set_status(LifecycleState next) {
  std::lock_guard lock(mu_);
  if (next == LifecycleState::kDone || next == LifecycleState::kFailed) {
    throw KernelError(ErrorCode::kTransition,
                      "terminal states are reached through complete() or cancel()");
  }
  if (!is_legal_transition(kind_, status_, next)) {
    throw KernelError(ErrorCode::kTransition,
                      "illegal transition " + std::string(to_string(status_)) + " -> " +
                          std::string(to_string(next)) + " for " +
                          std::string(to_string(kind_)) + " call " + std::to_string(call_id_));
  }
  status_ = next;
}

int SysCall::priority() const {
  std::lock_guard lock(mu_);
  return priority_;
}

void SysCall::set_priority(int p) {
  std::lock_guard lock(mu_);
  priority_ = p;
}

std::optional<Ticks> SysCall::time_limit() const {
  std::lock_guard lock(mu_);
  return time_limit_;
}

void SysCall::set_time_limit(std::optional<Ticks> limit) {
  std::lock_guard lock(mu_);
  time_limit_ = limit;
}

std::optional<Ticks> SysCall::start_time() const {
  std::lock_guard lock(mu_);
  return start_time_;
}

std::optional<Ticks> SysCall::end_time() const {
  std::lock_guard lock(mu_);
  return end_time_;
}

void SysCall::mark_started(Ticks t) {
  std::lock_guard lock(mu_);
  if (start_time_) return;
  if (t < created_time_) {
    throw KernelError(ErrorCode::kInternal, "start_time precedes created_time for call " +
                                                std::to_string(call_id_));
  }
  start_time_ = t;
}

void SysCall::finish_locked(std::unique_lock<std::mutex>& lock, Response response,
                            LifecycleState final_state, Ticks end_time) {
  if (!start_time_) start_time_ = std::max(created_time_, end_time);
  if (end_time < *start_time_) {
    throw KernelError(ErrorCode::kInternal,
                      "end_time precedes start_time for call " + std::to_string(call_id_));
  }
  status_ = final_state;
  end_time_ = end_time;
  response_ = std::move(response);
  signalled_ = true;
  lock.unlock();
  cv_.notify_all();
}

void SysCall::complete(Response response, LifecycleState final_state, Ticks end_time) {
  std::unique_lock lock(mu_);
  if (signalled_) {
    throw KernelError(ErrorCode::kTransition,
                      "call " + std::to_string(call_id_) + " already completed");
  }
  if (final_state != LifecycleState::kDone && final_state != LifecycleState::kFailed) {
    throw KernelError(ErrorCode::kTransition, "complete() requires a terminal state");
  }
  if (status_ != LifecycleState::kExecuting) {
    throw KernelError(ErrorCode::kTransition,
                      "complete() requires executing, call " + std::to_string(call_id_) +
                          " is " + std::string(to_string(status_)));
  }
  finish_locked(lock, std::move(response), final_state, end_time);
}

void SysCall::cancel(Response response, Ticks end_time) {
  std::unique_lock lock(mu_);
  if (signalled_) {
    throw KernelError(ErrorCode::kTransition,
                      "call " + std::to_string(call_id_) + " already completed");
  }
  if (!is_legal_transition(kind_, status_, LifecycleState::kFailed)) {
    throw KernelError(ErrorCode::kTransition, "cannot cancel call in state " +
                                                  std::string(to_string(status_)));
  }
  response.status = ResponseStatus::kFailed;
  finish_locked(lock, std::move(response), LifecycleState::kFailed,
                std::max(end_time, created_time_));
}

bool SysCall::is_complete() const {
  std::lock_guard lock(mu_);
  return signalled_;
}

Response SysCall::wait() const {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return signalled_; });
  return *response_;
}

std::optional<Response> SysCall::wait_for(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [&] { return signalled_; })) return std::nullopt;
  return response_;
}

std::optional<Response> SysCall::response() const {
  std::lock_guard lock(mu_);
  return response_;
}

SysCallPtr make_syscall(SyscallIdAllocator& ids, std::int64_t agent_id, std::string agent_name,
                        SyscallKind kind, SyscallPayload request, Ticks created_time) {
  return std::make_shared<SysCall>(ids.next(), agent_id, std::move(agent_name), kind,
                                   std::move(request), created_time);
}

}  // namespace agentkern
