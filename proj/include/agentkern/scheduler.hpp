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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <vector>

#include "agentkern/access_manager.hpp"
#include "agentkern/context_manager.hpp"
#include "agentkern/llm_core.hpp"
#include "agentkern/memory_manager.hpp"
#include "agentkern/storage_manager.hpp"
#include "agentkern/syscall.hpp"
#include "agentkern/tool_manager.hpp"

namespace agentkern {

enum class Strategy { kFifo, kRr };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct SchedulerConfig {
  Strategy strategy = Strategy::kFifo;
  std::int64_t time_slice = 16;  // decode tokens per RR turn
  std::int64_t max_concurrent_agents = 250;

  void validate() const;
};

enum class TraceEventType { kStart, kPreempt, kResume, kFinish, kFail };

std::string_view to_string(TraceEventType t);

struct TraceEvent {
  std::uint64_t call_id = 0;
  std::int64_t agent_id = 0;
  SyscallKind kind = SyscallKind::kLlm;
  TraceEventType type = TraceEventType::kStart;
  Ticks time = 0;
};

/// One uninterrupted run of an llm call on the core.
struct Segment {
  std::uint64_t call_id = 0;
  std::int64_t agent_id = 0;
  Ticks begin = 0;
  Ticks end = 0;
  std::int64_t prefill_tokens = 0;
  std::int64_t decode_tokens = 0;
};

struct ScheduleTrace {
  std::vector<TraceEvent> events;
  std::vector<Segment> segments;
};

/// Answers the llm-loop-independent syscalls that execute inline.
Response execute_access(AccessManager& access, const AccessRequest& req);
Response execute_memory(MemoryManager& memory, const MemoryRequest& req);
Response execute_storage(StorageManager& storage, const StorageRequest& req);

/// One queue per resource module and one processor loop per queue. The llm
/// queue is ordered by model-time arrival (ties: agent id, then call id); FIFO
/// runs each call to completion, RR runs at most time_slice decode tokens per
/// turn, snapshots unfinished calls through the context manager and
/// re-queues them at the tail.
///
/// Agents attached to the scheduler make the llm loop deterministic: it only
/// picks the next call once every attached agent is parked on an llm call or
/// detached, so the queue holds everything that arrives at or before the
/// current model time.
class Scheduler {
 public:
  Scheduler(SchedulerConfig config, LlmCore& core, ContextManager& context,
            MemoryManager& memory, StorageManager& storage, ToolManager& tools,
            AccessManager& access);
  ~Scheduler();

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// Spawns the llm, memory, storage and tool loops. Throws kRejected when
  /// already running or already stopped.
  void start();
  /// Stops accepting work; with drain, loops finish queued calls first,
  /// otherwise queued calls are cancelled. Joins every loop.
  void stop(bool drain = true);
  bool running() const;

  /// Queues the call by kind (access calls run inline on the caller).
  void dispatch(const SysCallPtr& call);

  void attach_agent(std::int64_t aid);
  void detach_agent(std::int64_t aid);
  /// Marks an attached agent as blocked on an llm call it already dispatched.
  void park_agent(std::int64_t aid);

  Ticks core_clock() const { return core_clock_.load(); }
  ScheduleTrace trace() const;
  const SchedulerConfig& config() const { return config_; }
  /// Snapshot of the llm queue in pick order (call ids).
  std::vector<std::uint64_t> llm_queue_order() const;
  std::size_t queued(SyscallKind kind) const;

 private:
  struct LlmEntry {
    Ticks enqueue_time;
    std::int64_t agent_id;
    std::uint64_t call_id;
    SysCallPtr call;

    bool operator<(const LlmEntry& o) const {
      return std::tie(enqueue_time, agent_id, call_id) <
             std::tie(o.enqueue_time, o.agent_id, o.call_id);
    }
  };

  struct ManagerQueue {
    mutable std::mutex mu;
    std::condition_variable cv;
    std::deque<SysCallPtr> calls;
  };

  void llm_loop();
  void run_llm_turn(LlmEntry entry);
  void manager_loop(ManagerQueue& q, SyscallKind kind);
  void tool_loop();
  void run_manager_call(const SysCallPtr& call, SyscallKind kind);
  void unpark_agent(std::int64_t aid);
  void record(const TraceEvent& e);
  void record_segment(const Segment& s);
  void cancel_pending(const SysCallPtr& call);

  SchedulerConfig config_;
  LlmCore& core_;
  ContextManager& context_;
  MemoryManager& memory_;
  StorageManager& storage_;
  ToolManager& tools_;
  AccessManager& access_;

  std::atomic<bool> running_{false};
  std::atomic<bool> stopped_{false};
  std::atomic<bool> stopping_{false};
  bool drain_ = true;

  // llm queue and the agent gate share one lock.
  mutable std::mutex llm_mu_;
  std::condition_variable llm_cv_;
  std::set<LlmEntry> llm_queue_;
  std::set<std::int64_t> attached_;
  std::set<std::int64_t> parked_;
  std::atomic<Ticks> core_clock_{0};

  ManagerQueue memory_q_;
  ManagerQueue storage_q_;

  mutable std::mutex tool_mu_;
  std::condition_variable tool_cv_;
  std::deque<SysCallPtr> tool_queue_;
  std::map<std::uint64_t, std::thread> tool_workers_;
  std::vector<std::uint64_t> finished_workers_;

  mutable std::mutex trace_mu_;
  ScheduleTrace trace_;

  std::vector<std::thread> loops_;
};

}  // namespace agentkern
