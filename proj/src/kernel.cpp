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

#include "agentkern/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <regex>

#include "agentkern/http_core.hpp"

namespace agentkern {

namespace {

std::unique_ptr<LlmCore> make_core(const KernelConfig& c) {
  if (c.core.core_kind == CoreKind::kHttp) return std::make_unique<HttpCore>(c.http, c.core.slots);
  return std::make_unique<SimCore>(c.core);
}

std::int64_t parse_int(std::string_view s, const char* what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw KernelError(ErrorCode::kValidation, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

Response permission_denied(std::int64_t sid, std::int64_t tid, const std::string& op) {
  return Response::failure("access", ErrorCode::kPermission,
                           "agent " + std::to_string(sid) + " may not " + op + " on agent " +
                               std::to_string(tid));
}

}  // namespace

FileCommand parse_file_command(std::string_view text) {
  const std::size_t nl = text.find('\n');
  const std::string_view head = text.substr(0, nl);
  FileCommand cmd;
  if (nl != std::string_view::npos) cmd.body = std::string(text.substr(nl + 1));
  const auto words = split_whitespace(head);
  if (words.size() < 2) {
    throw KernelError(ErrorCode::kValidation, "file command needs a verb and a file name");
  }
  const std::string verb(words[0]);
  if (verb == "create") {
    cmd.op = StorageRequest::Op::kCreate;
  } else if (verb == "write") {
    cmd.op = StorageRequest::Op::kWrite;
  } else if (verb == "read") {
    cmd.op = StorageRequest::Op::kRead;
  } else if (verb == "retrieve") {
    cmd.op = StorageRequest::Op::kRetrieve;
  } else if (verb == "clear") {
    cmd.op = StorageRequest::Op::kClear;
  } else {
    throw KernelError(ErrorCode::kValidation, "unknown file command '" + verb + "'");
  }
  static const std::regex kFileName("[A-Za-z0-9_.-]+");
  cmd.file = std::string(words[1]);
  if (!std::regex_match(cmd.file, kFileName) || cmd.file == "." || cmd.file == "..") {
    throw KernelError(ErrorCode::kValidation, "invalid file name '" + cmd.file + "'");
  }
  bool have_k = false;
  for (std::size_t i = 2; i < words.size(); ++i) {
    const std::string w(words[i]);
    if (w.size() > 1 && w[0] == '@' && !cmd.owner) {
      cmd.owner = parse_int(std::string_view(w).substr(1), "owner");
    } else if (cmd.op == StorageRequest::Op::kRetrieve && !have_k) {
      cmd.k = parse_int(w, "k");
      if (cmd.k < 0) throw KernelError(ErrorCode::kValidation, "k must be >= 0");
      have_k = true;
    } else {
      throw KernelError(ErrorCode::kValidation, "unexpected argument '" + w + "'");
    }
  }
  return cmd;
}

std::string file_record_name(std::int64_t owner, std::string_view file) {
  return "a" + std::to_string(owner) + "." + std::string(file);
}

// ---------------------------------------------------------------------------

Kernel::Kernel(KernelConfig config, ConsentChannel consent)
    : config_((config.validate(), std::move(config))),
      core_(make_core(config_)),
      context_(config_.context_mode),
      storage_(config_.storage_root),
      memory_(config_.memory, storage_),
      access_(config_.access, std::move(consent)) {
  for (std::size_t i = 0; i < config_.tools.size(); ++i) {
    const ToolConfig& t = config_.tools[i];
    std::string cls = t.mock_class;
    if (cls.empty()) {
      const auto slash = t.schema.name.find('/');
      cls = snake_to_camel(t.schema.name.substr(slash + 1));
    }
    MockToolOptions opts;
    opts.cost_units = t.cost_units;
    opts.unit_duration = config_.tool_unit_duration;
    opts.fail_probability = t.fail_probability;
    opts.seed = config_.core.seed;
    ToolFactory factory = mock_tool_factory(cls, opts);
    if (!factory) {
      throw KernelError(ErrorCode::kConfig,
                        "tools[" + std::to_string(i) + "].mock: unknown tool class '" + cls + "'");
    }
    tools_.register_tool(ToolRegistration{t.schema, t.max_parallel, t.cost_units, std::move(factory)});
  }
  scheduler_ = std::make_unique<Scheduler>(config_.scheduler, *core_, context_, memory_, storage_,
                                           tools_, access_);
}

Kernel::~Kernel() {
  if (scheduler_ && scheduler_->running()) scheduler_->stop(false);
}

void Kernel::start() { scheduler_->start(); }
void Kernel::stop(bool drain) { scheduler_->stop(drain); }
bool Kernel::running() const { return scheduler_->running(); }

std::int64_t Kernel::register_agent(const std::string& name, Ticks start_clock) {
  std::int64_t aid = 0;
  {
    std::lock_guard lock(agents_mu_);
    aid = next_aid_++;
    agents_[aid] = Agent{name, start_clock, false};
  }
  access_.register_agent(aid);
  return aid;
}

bool Kernel::is_registered(std::int64_t aid) const {
  std::lock_guard lock(agents_mu_);
  return agents_.count(aid) > 0;
}

void Kernel::require_agent(std::int64_t aid) const {
  if (!is_registered(aid)) {
    throw KernelError(ErrorCode::kRejected, "unknown agent " + std::to_string(aid));
  }
}

Ticks Kernel::agent_clock(std::int64_t aid) const {
  std::lock_guard lock(agents_mu_);
  auto it = agents_.find(aid);
  if (it == agents_.end()) throw KernelError(ErrorCode::kRejected, "unknown agent " + std::to_string(aid));
  return it->second.clock;
}

void Kernel::advance_agent_clock(std::int64_t aid, Ticks t) {
  std::lock_guard lock(agents_mu_);
  auto it = agents_.find(aid);
  if (it == agents_.end()) throw KernelError(ErrorCode::kRejected, "unknown agent " + std::to_string(aid));
  it->second.clock = std::max(it->second.clock, t);
}

void Kernel::attach_agent(std::int64_t aid) {
  {
    std::lock_guard lock(agents_mu_);
    auto it = agents_.find(aid);
    if (it == agents_.end()) throw KernelError(ErrorCode::kRejected, "unknown agent " + std::to_string(aid));
    it->second.attached = true;
  }
  scheduler_->attach_agent(aid);
}

void Kernel::detach_agent(std::int64_t aid) {
  {
    std::lock_guard lock(agents_mu_);
    auto it = agents_.find(aid);
    if (it != agents_.end()) it->second.attached = false;
  }
  scheduler_->detach_agent(aid);
}

std::vector<DispatchRecord> Kernel::dispatch_log() const {
  std::lock_guard lock(log_mu_);
  return dispatch_log_;
}

// ---------------------------------------------------------------------------
// Syscall plumbing

SysCallPtr Kernel::issue(std::int64_t aid, SyscallKind kind, SyscallPayload payload) {
  std::string name;
  Ticks clock = 0;
  bool attached = false;
  {
    std::lock_guard lock(agents_mu_);
    auto it = agents_.find(aid);
    if (it == agents_.end()) throw KernelError(ErrorCode::kRejected, "unknown agent " + std::to_string(aid));
    name = it->second.name;
    clock = it->second.clock;
    attached = it->second.attached;
  }
  SysCallPtr call = make_syscall(ids_, aid, std::move(name), kind, std::move(payload), clock);
  {
    std::lock_guard lock(log_mu_);
    dispatch_log_.push_back(DispatchRecord{call->call_id(), aid, kind, clock});
  }
  scheduler_->dispatch(call);
  if (kind == SyscallKind::kLlm && attached) scheduler_->park_agent(aid);
  return call;
}

Response Kernel::await(std::int64_t aid, const SysCallPtr& call) {
  Response r = call->wait();
  const auto end = call->end_time();
  std::lock_guard lock(agents_mu_);
  auto it = agents_.find(aid);
  if (it != agents_.end() && end) it->second.clock = std::max(it->second.clock, *end);
  return r;
}

Response Kernel::run_syscall(std::int64_t aid, SyscallKind kind, SyscallPayload payload,
                             std::vector<SysCallPtr>* trace) {
  SysCallPtr call = issue(aid, kind, std::move(payload));
  if (trace) trace->push_back(call);
  return await(aid, call);
}

// ---------------------------------------------------------------------------
// Queries

Response Kernel::submit(std::int64_t aid, const Query& query) {
  return submit_traced(aid, query).response;
}

std::future<Response> Kernel::submit_async(std::int64_t aid, Query query) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  require_agent(aid);
  return std::async(std::launch::async,
                    [this, aid, q = std::move(query)] { return submit(aid, q); });
}

SubmitTrace Kernel::submit_traced(std::int64_t aid, const Query& query) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  require_agent(aid);
  SubmitTrace out;
  try {
    validate_query(query);
  } catch (const KernelError& e) {
    out.response = Response::failure("sdk", e.code(), e.what());
    return out;
  }
  switch (query.action_type) {
    case ActionType::kChat:
      out.response = run_chat(aid, query, &out.calls);
      break;
    case ActionType::kToolUse:
      out.response = run_tool_use(aid, query, &out.calls);
      break;
    case ActionType::kFileOperation:
      out.response = run_file_operation(aid, query, &out.calls);
      break;
  }
  return out;
}

Response Kernel::run_chat(std::int64_t aid, const Query& query, std::vector<SysCallPtr>* trace) {
  return run_syscall(aid, SyscallKind::kLlm, query, trace);
}

Response Kernel::run_tool_use(std::int64_t aid, const Query& query,
                              std::vector<SysCallPtr>* trace) {
  Response first = run_syscall(aid, SyscallKind::kLlm, query, trace);
  if (!first.ok() || !first.tool_calls || first.tool_calls->empty()) return first;
  const std::vector<ToolCall>& calls = *first.tool_calls;

  // Tool calls of one generation are independent; dispatch all, then join.
  std::vector<SysCallPtr> pending;
  for (const auto& tc : calls) {
    pending.push_back(issue(aid, SyscallKind::kTool, tc));
    if (trace) trace->push_back(pending.back());
  }
  std::vector<Response> results;
  for (const auto& c : pending) results.push_back(await(aid, c));
  for (const auto& r : results) {
    if (!r.ok()) return r;
  }

  if (!config_.tool_followup) {
    Response out;
    std::string joined;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i) joined.push_back('\n');
      joined += calls[i].name + ": " + results[i].response_message.value_or("");
    }
    out.response_message = joined;
    out.tool_calls = calls;
    return out;
  }

  Query followup;
  followup.action_type = ActionType::kChat;
  followup.generation = query.generation;
  followup.messages = query.messages;
  followup.messages.push_back(Message{"assistant", render_tool_call_array(calls)});
  for (std::size_t i = 0; i < results.size(); ++i) {
    followup.messages.push_back(
        Message{"tool", calls[i].name + ": " + results[i].response_message.value_or("")});
  }
  Response final = run_syscall(aid, SyscallKind::kLlm, followup, trace);
  if (final.ok()) final.tool_calls = calls;
  return final;
}

Response Kernel::run_file_operation(std::int64_t aid, const Query& query,
                                    std::vector<SysCallPtr>* trace) {
  FileCommand cmd;
  try {
    cmd = parse_file_command(query.messages.back().content);
  } catch (const KernelError& e) {
    return Response::failure("sdk", e.code(), e.what());
  }
  const std::int64_t owner = cmd.owner.value_or(aid);
  if (owner != aid) {
    if (!is_registered(owner)) {
      return Response::failure("access", ErrorCode::kNotFound,
                               "unknown agent " + std::to_string(owner));
    }
  }
  const bool gated = owner != aid || cmd.op == StorageRequest::Op::kClear;
  if (gated) {
    const std::string op = cmd.op == StorageRequest::Op::kClear ? "sto_clear" : "sto_access";
    if (!access_.authorize(aid, owner, op)) return permission_denied(aid, owner, op);
  }
  StorageRequest req;
  req.op = cmd.op;
  req.aname = file_record_name(owner, cmd.file);
  req.payload = cmd.body;
  req.k = cmd.k;
  return run_syscall(aid, SyscallKind::kStorage, req, trace);
}

// ---------------------------------------------------------------------------
// Memory and access

Response Kernel::mem_alloc(std::int64_t aid) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  return run_syscall(aid, SyscallKind::kMemory, MemoryRequest{MemoryRequest::Op::kAlloc, aid, 0, {}},
                     nullptr);
}

Response Kernel::mem_write(std::int64_t aid, std::int64_t rid, const std::string& text) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  return run_syscall(aid, SyscallKind::kMemory,
                     MemoryRequest{MemoryRequest::Op::kWrite, aid, rid, text}, nullptr);
}

Response Kernel::mem_read(std::int64_t aid, std::int64_t rid) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  return run_syscall(aid, SyscallKind::kMemory, MemoryRequest{MemoryRequest::Op::kRead, aid, rid, {}},
                     nullptr);
}

Response Kernel::mem_clear(std::int64_t sid, std::int64_t tid) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  require_agent(sid);
  require_agent(tid);
  if (!access_.authorize(sid, tid, "mem_clear")) return permission_denied(sid, tid, "mem_clear");
  return run_syscall(sid, SyscallKind::kMemory, MemoryRequest{MemoryRequest::Op::kClear, tid, 0, {}},
                     nullptr);
}

Response Kernel::add_privilege(std::int64_t sid, std::int64_t tid) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  require_agent(sid);
  require_agent(tid);
  if (!access_.authorize(tid, tid, "privilege_change")) {
    return permission_denied(tid, tid, "privilege_change");
  }
  AccessRequest req{AccessRequest::Op::kAddPrivilege, sid, tid, {}};
  return run_syscall(tid, SyscallKind::kAccess, req, nullptr);
}

Response Kernel::check_access(std::int64_t sid, std::int64_t tid) {
  if (!running()) throw KernelError(ErrorCode::kRejected, "kernel is not running");
  AccessRequest req{AccessRequest::Op::kCheckAccess, sid, tid, {}};
  return run_syscall(sid, SyscallKind::kAccess, req, nullptr);
}

std::unique_ptr<Kernel> bootstrap_kernel(const KernelConfig& config, ConsentChannel consent) {
  return std::make_unique<Kernel>(config, std::move(consent));
}

}  // namespace agentkern
