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

#include "agentkern/scheduler.hpp"

#include <algorithm>
#include <chrono>

namespace agentkern {

std::string_view to_string(Strategy s) { return s == Strategy::kFifo ? "fifo" : "rr"; }

Strategy parse_strategy(std::string_view s) {
  if (s == "fifo") return Strategy::kFifo;
  if (s == "rr") return Strategy::kRr;
  throw KernelError(ErrorCode::kConfig,
                    "scheduler.strategy must be fifo or rr, got '" + std::string(s) + "'");
}

void SchedulerConfig::validate() const {
  if (time_slice < 1) throw KernelError(ErrorCode::kConfig, "scheduler.time_slice must be >= 1");
  if (max_concurrent_agents < 1) {
    throw KernelError(ErrorCode::kConfig, "scheduler.max_concurrent_agents must be >= 1");
  }
}

std::string_view to_string(TraceEventType t) {
  switch (t) {
    case TraceEventType::kStart: return "start";
    case TraceEventType::kPreempt: return "preempt";
    case TraceEventType::kResume: return "resume";
    case TraceEventType::kFinish: return "finish";
    case TraceEventType::kFail: return "fail";
  }
  return "start";
}

// ---------------------------------------------------------------------------
// Inline executors

Response execute_access(AccessManager& access, const AccessRequest& req) {
  try {
    switch (req.op) {
      case AccessRequest::Op::kCheckAccess:
        return Response::text(access.check_access(req.sid, req.tid) ? "true" : "false");
      case AccessRequest::Op::kAddPrivilege:
        access.add_privilege(req.sid, req.tid);
        return Response::text("ok");
      case AccessRequest::Op::kAskPermission:
        return Response::text(access.ask_permission(req.sid, req.operation) ? "granted" : "denied");
    }
  } catch (const KernelError& e) {
    return Response::failure("access", e.code(), e.what());
  }
  return Response::failure("access", ErrorCode::kInternal, "unhandled access op");
}

Response execute_memory(MemoryManager& memory, const MemoryRequest& req) {
  try {
    switch (req.op) {
      case MemoryRequest::Op::kAlloc:
        memory.mem_alloc(req.aid);
        return Response::text("ok");
      case MemoryRequest::Op::kRead:
        return Response::text(memory.mem_read(req.aid, req.rid));
      case MemoryRequest::Op::kWrite:
        memory.mem_write(req.aid, req.rid, req.payload);
        return Response::text("ok");
      case MemoryRequest::Op::kClear:
        memory.mem_clear(req.aid);
        return Response::text("ok");
    }
  } catch (const KernelError& e) {
    return Response::failure("memory", e.code(), e.what());
  }
  return Response::failure("memory", ErrorCode::kInternal, "unhandled memory op");
}

Response execute_storage(StorageManager& storage, const StorageRequest& req) {
  try {
    switch (req.op) {
      case StorageRequest::Op::kCreate:
        storage.sto_create(req.aname, req.aid, req.rid);
        return Response::text("ok");
      case StorageRequest::Op::kRead: {
        auto text = storage.sto_read(req.aname, req.aid, req.rid);
        if (!text) {
          return Response::failure("storage", ErrorCode::kNotFound,
                                   "no record '" + record_name(req.aname, req.aid, req.rid) + "'");
        }
        return Response::text(*text);
      }
      case StorageRequest::Op::kWrite:
        storage.sto_write(req.aname, req.payload, req.aid, req.rid);
        return Response::text("ok");
      case StorageRequest::Op::kRetrieve: {
        if (req.k < 0) throw KernelError(ErrorCode::kValidation, "k must be >= 0");
        const auto hits = storage.sto_retrieve(req.aname, req.payload, req.aid, req.rid,
                                               static_cast<std::size_t>(req.k));
        std::string joined;
        for (const auto& h : hits) {
          if (!joined.empty()) joined.push_back('\n');
          joined += h;
        }
        return Response::text(joined);
      }
      case StorageRequest::Op::kClear:
        storage.sto_clear(req.aname, req.aid, req.rid);
        return Response::text("ok");
    }
  } catch (const KernelError& e) {
    return Response::failure("storage", e.code(), e.what());
  }
  return Response::failure("storage", ErrorCode::kInternal, "unhandled storage op");
}

// ---------------------------------------------------------------------------

Scheduler::Scheduler(SchedulerConfig config, LlmCore& core, ContextManager& context,
                     MemoryManager& memory, StorageManager& storage, ToolManager& tools,
                     AccessManager& access)
    : config_(config),
      core_(core),
      context_(context),
      memory_(memory),
      storage_(storage),
      tools_(tools),
      access_(access) {
  config_.validate();
}

Scheduler::~Scheduler() {
  if (running_) stop(false);
}

bool Scheduler::running() const { return running_ && !stopping_; }

void Scheduler::start() {
  if (running_ || stopped_) {
    throw KernelError(ErrorCode::kRejected, running_ ? "scheduler already running"
                                                     : "scheduler cannot restart after stop");
  }
  running_ = true;
  loops_.emplace_back([this] { llm_loop(); });
  loops_.emplace_back([this] { manager_loop(memory_q_, SyscallKind::kMemory); });
  loops_.emplace_back([this] { manager_loop(storage_q_, SyscallKind::kStorage); });
  loops_.emplace_back([this] { tool_loop(); });
}

void Scheduler::cancel_pending(const SysCallPtr& call) {
  context_.clear_restore(call->call_id());
  call->cancel(Response::failure("scheduler", ErrorCode::kRejected, "kernel stopped"),
               call->created_time());
}

void Scheduler::stop(bool drain) {
  if (!running_ || stopping_) throw KernelError(ErrorCode::kRejected, "scheduler is not running");
  {
    std::scoped_lock lock(llm_mu_, memory_q_.mu, storage_q_.mu, tool_mu_);
    stopping_ = true;
    drain_ = drain;
    if (!drain) {
      for (const auto& e : llm_queue_) cancel_pending(e.call);
      llm_queue_.clear();
      for (auto* q : {&memory_q_, &storage_q_}) {
        for (const auto& c : q->calls) cancel_pending(c);
        q->calls.clear();
      }
      for (const auto& c : tool_queue_) cancel_pending(c);
      tool_queue_.clear();
    }
  }
  llm_cv_.notify_all();
  memory_q_.cv.notify_all();
  storage_q_.cv.notify_all();
  tool_cv_.notify_all();
  for (auto& t : loops_) t.join();
  loops_.clear();
  running_ = false;
  stopped_ = true;
}

void Scheduler::dispatch(const SysCallPtr& call) {
  if (!running_ || stopping_) {
    throw KernelError(ErrorCode::kRejected, "kernel is not running");
  }
  if (call->kind() == SyscallKind::kAccess) {
    // Access calls never enter a queue.
    call->set_status(LifecycleState::kExecuting);
    const Ticks t = call->created_time();
    call->mark_started(t);
    Response r = execute_access(access_, std::get<AccessRequest>(call->request()));
    record({call->call_id(), call->agent_id(), SyscallKind::kAccess,
            r.ok() ? TraceEventType::kFinish : TraceEventType::kFail, t});
    const auto final_state = r.ok() ? LifecycleState::kDone : LifecycleState::kFailed;
    call->complete(std::move(r), final_state, t);
    return;
  }

  auto reject = [] { throw KernelError(ErrorCode::kRejected, "kernel is stopping"); };
  switch (call->kind()) {
    case SyscallKind::kLlm: {
      if (!std::holds_alternative<Query>(call->request())) {
        throw KernelError(ErrorCode::kValidation, "llm call without a query");
      }
      {
        std::lock_guard lock(llm_mu_);
        if (stopping_) reject();
        call->set_status(LifecycleState::kQueued);
        llm_queue_.insert(
            LlmEntry{call->created_time(), call->agent_id(), call->call_id(), call});
      }
      llm_cv_.notify_all();
      return;
    }
    case SyscallKind::kMemory:
    case SyscallKind::kStorage: {
      ManagerQueue& q = call->kind() == SyscallKind::kMemory ? memory_q_ : storage_q_;
      {
        std::lock_guard lock(q.mu);
        if (stopping_) reject();
        call->set_status(LifecycleState::kQueued);
        q.calls.push_back(call);
      }
      q.cv.notify_one();
      return;
    }
    case SyscallKind::kTool: {
      if (!std::holds_alternative<ToolCall>(call->request())) {
        throw KernelError(ErrorCode::kValidation, "tool call without a ToolCall payload");
      }
      {
        std::lock_guard lock(tool_mu_);
        if (stopping_) reject();
        call->set_status(LifecycleState::kQueued);
        tool_queue_.push_back(call);
      }
      tool_cv_.notify_all();
      return;
    }
    case SyscallKind::kAccess:
      break;
  }
}

// ---------------------------------------------------------------------------
// Agent gate

void Scheduler::attach_agent(std::int64_t aid) {
  std::lock_guard lock(llm_mu_);
  attached_.insert(aid);
}

void Scheduler::detach_agent(std::int64_t aid) {
  {
    std::lock_guard lock(llm_mu_);
    attached_.erase(aid);
    parked_.erase(aid);
  }
  llm_cv_.notify_all();
}

void Scheduler::park_agent(std::int64_t aid) {
  {
    std::lock_guard lock(llm_mu_);
    if (!attached_.count(aid)) return;
    parked_.insert(aid);
  }
  llm_cv_.notify_all();
}

void Scheduler::unpark_agent(std::int64_t aid) {
  std::lock_guard lock(llm_mu_);
  parked_.erase(aid);
}

// ---------------------------------------------------------------------------
// LLM loop

void Scheduler::llm_loop() {
  SlotLease lease = core_.acquire_slot();
  while (true) {
    LlmEntry entry;
    {
      std::unique_lock lock(llm_mu_);
      llm_cv_.wait(lock, [&] {
        const bool gate_open = parked_.size() == attached_.size();
        return (!llm_queue_.empty() && gate_open) || (stopping_ && llm_queue_.empty());
      });
      if (llm_queue_.empty()) return;
      entry = *llm_queue_.begin();
      llm_queue_.erase(llm_queue_.begin());
    }
    run_llm_turn(std::move(entry));
  }
}

void Scheduler::run_llm_turn(LlmEntry entry) {
  const SysCallPtr& call = entry.call;
  const std::uint64_t cid = call->call_id();
  const std::int64_t aid = call->agent_id();
  const Query& query = std::get<Query>(call->request());
  const bool resumed = call->status() == LifecycleState::kSuspended;
  call->set_status(LifecycleState::kExecuting);

  const Ticks start = std::max(core_clock_.load(), entry.enqueue_time);
  call->mark_started(start);
  record({cid, aid, SyscallKind::kLlm, resumed ? TraceEventType::kResume : TraceEventType::kStart,
          start});

  auto finish = [&](Response r, Ticks end) {
    context_.clear_restore(cid);
    const bool ok = r.ok();
    record({cid, aid, SyscallKind::kLlm, ok ? TraceEventType::kFinish : TraceEventType::kFail, end});
    unpark_agent(aid);
    call->complete(std::move(r), ok ? LifecycleState::kDone : LifecycleState::kFailed, end);
  };

  std::optional<DecodeSnapshot> snapshot;
  try {
    snapshot = context_.resume_generation(cid, core_.prompt_hash(build_llm_request(query)));
  } catch (const KernelError& e) {
    finish(Response::failure("context", e.code(), e.what()), start);
    return;
  }

  Budget budget;
  if (config_.strategy == Strategy::kRr && core_.supports_suspension()) {
    budget.decode_tokens = config_.time_slice;
    budget.time = config_.time_slice * core_.decode_tick_cost();
  }
  AddressOutcome out = address_request(core_, query, budget, snapshot ? &*snapshot : nullptr,
                                       context_.mode(), cid);
  const Ticks end = start + out.cost;
  core_clock_.store(end);
  if (out.cost > 0 || out.prefill_tokens + out.decode_tokens > 0) {
    record_segment({cid, aid, start, end, out.prefill_tokens, out.decode_tokens});
  }

  if (out.suspended) {
    try {
      context_.suspend_generation(cid, std::move(*out.suspended));
    } catch (const KernelError& e) {
      finish(Response::failure("context", e.code(), e.what()), end);
      return;
    }
    call->set_status(LifecycleState::kSuspended);
    record({cid, aid, SyscallKind::kLlm, TraceEventType::kPreempt, end});
    {
      std::lock_guard lock(llm_mu_);
      llm_queue_.insert(LlmEntry{end, aid, cid, call});
    }
    return;
  }
  finish(std::move(*out.response), end);
}

// ---------------------------------------------------------------------------
// Manager loops

void Scheduler::run_manager_call(const SysCallPtr& call, SyscallKind kind) {
  call->set_status(LifecycleState::kExecuting);
  const Ticks t = call->created_time();
  call->mark_started(t);
  record({call->call_id(), call->agent_id(), kind, TraceEventType::kStart, t});
  Response r = kind == SyscallKind::kMemory
                   ? execute_memory(memory_, std::get<MemoryRequest>(call->request()))
                   : execute_storage(storage_, std::get<StorageRequest>(call->request()));
  const bool ok = r.ok();
  record({call->call_id(), call->agent_id(), kind,
          ok ? TraceEventType::kFinish : TraceEventType::kFail, t});
  call->complete(std::move(r), ok ? LifecycleState::kDone : LifecycleState::kFailed, t);
}

void Scheduler::manager_loop(ManagerQueue& q, SyscallKind kind) {
  while (true) {
    SysCallPtr call;
    {
      std::unique_lock lock(q.mu);
      q.cv.wait(lock, [&] { return !q.calls.empty() || stopping_; });
      if (q.calls.empty()) return;
      call = std::move(q.calls.front());
      q.calls.pop_front();
    }
    run_manager_call(call, kind);
  }
}

void Scheduler::tool_loop() {
  std::unique_lock lock(tool_mu_);
  while (true) {
    for (std::uint64_t id : finished_workers_) {
      auto it = tool_workers_.find(id);
      it->second.join();
      tool_workers_.erase(it);
    }
    finished_workers_.clear();

    if (tool_queue_.empty()) {
      if (stopping_ && tool_workers_.empty()) return;
      tool_cv_.wait(lock);
      continue;
    }

    // Skip-scan: earliest call whose tool is under its limit; skipped calls
    // keep their positions and are retried from the front on every pass.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < tool_queue_.size(); ++i) {
      if (tools_.try_reserve(std::get<ToolCall>(tool_queue_[i]->request()).name)) {
        pick = i;
        break;
      }
    }
    if (!pick) {
      // Woken by worker completions; the timeout covers releases by direct
      // tool_run users outside the kernel.
      tool_cv_.wait_for(lock, std::chrono::milliseconds(5));
      continue;
    }

    SysCallPtr call = tool_queue_[*pick];
    tool_queue_.erase(tool_queue_.begin() + static_cast<std::ptrdiff_t>(*pick));
    call->set_status(LifecycleState::kExecuting);
    const Ticks t = call->created_time();
    call->mark_started(t);
    record({call->call_id(), call->agent_id(), SyscallKind::kTool, TraceEventType::kStart, t});

    const std::uint64_t id = call->call_id();
    tool_workers_.emplace(id, std::thread([this, call, id, t] {
      Response r = tools_.run_reserved(std::get<ToolCall>(call->request()));
      const bool ok = r.ok();
      record({id, call->agent_id(), SyscallKind::kTool,
              ok ? TraceEventType::kFinish : TraceEventType::kFail, t});
      call->complete(std::move(r), ok ? LifecycleState::kDone : LifecycleState::kFailed, t);
      {
        std::lock_guard l(tool_mu_);
        finished_workers_.push_back(id);
      }
      tool_cv_.notify_all();
    }));
  }
}

// ---------------------------------------------------------------------------

void Scheduler::record(const TraceEvent& e) {
  std::lock_guard lock(trace_mu_);
  trace_.events.push_back(e);
}

void Scheduler::record_segment(const Segment& s) {
  std::lock_guard lock(trace_mu_);
  trace_.segments.push_back(s);
}

ScheduleTrace Scheduler::trace() const {
  std::lock_guard lock(trace_mu_);
  return trace_;
}

std::vector<std::uint64_t> Scheduler::llm_queue_order() const {
  std::lock_guard lock(llm_mu_);
  std::vector<std::uint64_t> out;
  for (const auto& e : llm_queue_) out.push_back(e.call_id);
  return out;
}

std::size_t Scheduler::queued(SyscallKind kind) const {
  switch (kind) {
    case SyscallKind::kLlm: {
      std::lock_guard lock(llm_mu_);
      return llm_queue_.size();
    }
    case SyscallKind::kMemory: {
      std::lock_guard lock(memory_q_.mu);
      return memory_q_.calls.size();
    }
    case SyscallKind::kStorage: {
      std::lock_guard lock(storage_q_.mu);
      return storage_q_.calls.size();
    }
    case SyscallKind::kTool: {
      std::lock_guard lock(tool_mu_);
      return tool_queue_.size();
    }
    case SyscallKind::kAccess:
      return 0;
  }
  return 0;
}

}  // namespace agentkern
