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

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "agentkern/config.hpp"
#include "agentkern/scheduler.hpp"

namespace agentkern {

struct DispatchRecord {
  std::uint64_t call_id = 0;
  std::int64_t agent_id = 0;
  SyscallKind kind = SyscallKind::kLlm;
  Ticks created_time = 0;
};

/// Final response of a query plus every syscall it produced, in dispatch order.
struct SubmitTrace {
  Response response;
  std::vector<SysCallPtr> calls;
};

/// File-operation command carried in the last message of a file_operation
/// query:
///   create <file>
///   write <file> [@owner]\n<text>
///   read <file> [@owner]
///   retrieve <file> [@owner] [k]\n<query>
///   clear <file> [@owner]
struct FileCommand {
  StorageRequest::Op op = StorageRequest::Op::kRead;
  std::string file;
  std::optional<std::int64_t> owner;
  std::int64_t k = 3;
  std::string body;
};

FileCommand parse_file_command(std::string_view text);
/// Storage record name of an agent's file.
std::string file_record_name(std::int64_t owner, std::string_view file);

/// The application-facing kernel: owns the core, the managers and the
/// scheduler, and turns queries into syscalls.
class Kernel {
 public:
  explicit Kernel(KernelConfig config, ConsentChannel consent = nullptr);
  ~Kernel();

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  void start();
  void stop(bool drain = true);
  bool running() const;
  const KernelConfig& config() const { return config_; }

  /// Issues a new agent id. start_clock is the agent's initial model time.
  std::int64_t register_agent(const std::string& name, Ticks start_clock = 0);
  bool is_registered(std::int64_t aid) const;
  Ticks agent_clock(std::int64_t aid) const;
  /// Moves the agent's clock forward to t (never backward).
  void advance_agent_clock(std::int64_t aid, Ticks t);

  /// Blocking submit. Throws kRejected when the kernel is not running or the
  /// agent is unknown; every stage failure comes back as a failed Response.
  Response submit(std::int64_t aid, const Query& query);
  std::future<Response> submit_async(std::int64_t aid, Query query);
  SubmitTrace submit_traced(std::int64_t aid, const Query& query);

  Response mem_alloc(std::int64_t aid);
  Response mem_write(std::int64_t aid, std::int64_t rid, const std::string& text);
  Response mem_read(std::int64_t aid, std::int64_t rid);
  /// sid clears tid's memory block; gated by the access manager.
  Response mem_clear(std::int64_t sid, std::int64_t tid);

  /// Puts sid into tid's privilege group (a privilege_change by tid).
  Response add_privilege(std::int64_t sid, std::int64_t tid);
  Response check_access(std::int64_t sid, std::int64_t tid);

  // Harness hooks: deterministic model-time scheduling across submitter
  // threads (see Scheduler).
  void attach_agent(std::int64_t aid);
  void detach_agent(std::int64_t aid);

  ScheduleTrace schedule_trace() const { return scheduler_->trace(); }
  std::vector<DispatchRecord> dispatch_log() const;
  std::vector<AuditEntry> audit_log() const { return access_.audit_log(); }
  Ticks core_clock() const { return scheduler_->core_clock(); }
  LlmCore& core() { return *core_; }
  ToolManager& tools() { return tools_; }

 private:
  struct Agent {
    std::string name;
    Ticks clock = 0;
    bool attached = false;
  };

  SysCallPtr issue(std::int64_t aid, SyscallKind kind, SyscallPayload payload);
  Response await(std::int64_t aid, const SysCallPtr& call);
  Response run_syscall(std::int64_t aid, SyscallKind kind, SyscallPayload payload,
                       std::vector<SysCallPtr>* trace);
  Response run_chat(std::int64_t aid, const Query& query, std::vector<SysCallPtr>* trace);
  Response run_tool_use(std::int64_t aid, const Query& query, std::vector<SysCallPtr>* trace);
  Response run_file_operation(std::int64_t aid, const Query& query,
                              std::vector<SysCallPtr>* trace);
  void require_agent(std::int64_t aid) const;

  KernelConfig config_;
  std::unique_ptr<LlmCore> core_;
  ContextManager context_;
  StorageManager storage_;
  MemoryManager memory_;
  ToolManager tools_;
  AccessManager access_;
  std::unique_ptr<Scheduler> scheduler_;
  SyscallIdAllocator ids_;

  mutable std::mutex agents_mu_;
  std::map<std::int64_t, Agent> agents_;
  std::int64_t next_aid_ = 1;

  mutable std::mutex log_mu_;
  std::vector<DispatchRecord> dispatch_log_;
};

/// Validates the config and wires every module; nothing runs until start().
std::unique_ptr<Kernel> bootstrap_kernel(const KernelConfig& config,
                                         ConsentChannel consent = nullptr);

}  // namespace agentkern
