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

#include "agentkern/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace agentkern::bench {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw KernelError(ErrorCode::kConfig, key + ": " + what);
}

double unit_interval(std::uint64_t seed, std::int64_t agent, std::int64_t index, std::uint64_t stream) {
  std::uint64_t h = hash_combine(seed, static_cast<std::uint64_t>(agent));
  h = hash_combine(h, static_cast<std::uint64_t>(index));
  h = splitmix64(hash_combine(h, stream));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

TokenDist parse_dist(const std::string& key, const json& v) {
  if (v.is_number_integer()) {
    TokenDist d = TokenDist::fixed(v.get<std::int64_t>());
    d.validate(key);
    return d;
  }
  if (!v.is_object() || v.size() != 1) {
    bad(key, "expected an integer, {\"uniform\": [a, b]} or {\"bimodal\": [short, long, p_long]}");
  }
  const auto& [kind, args] = *v.items().begin();
  TokenDist d;
  if (kind == "uniform" && args.is_array() && args.size() == 2 && args[0].is_number_integer() &&
      args[1].is_number_integer()) {
    d = TokenDist::uniform(args[0].get<std::int64_t>(), args[1].get<std::int64_t>());
  } else if (kind == "bimodal" && args.is_array() && args.size() == 3 &&
             args[0].is_number_integer() && args[1].is_number_integer() && args[2].is_number()) {
    d = TokenDist::bimodal(args[0].get<std::int64_t>(), args[1].get<std::int64_t>(),
                           args[2].get<double>());
  } else {
    bad(key, "malformed distribution");
  }
  d.validate(key);
  return d;
}

std::int64_t int_key(const std::string& key, const json& v) {
  if (!v.is_number_integer()) bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

double number_key(const std::string& key, const json& v) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::string response_text(const Response& r) {
  if (r.ok()) return r.response_message.value_or(render_tool_call_array(r.tool_calls.value_or(std::vector<ToolCall>{})));
  return r.error ? r.error->stage + ": " + r.error->message : "failed";
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::filesystem::path fresh_run_dir(const std::filesystem::path& root) {
  static std::atomic<std::uint64_t> counter{0};
  auto dir = root / ("run-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  return dir;
}

// Removes the run directory, and its parent too when this run created it
// and nothing else lives there.
struct DirCleanup {
  std::filesystem::path dir;
  bool parent_existed = std::filesystem::exists(dir.parent_path());
  ~DirCleanup() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
    if (!parent_existed && std::filesystem::is_empty(dir.parent_path(), ec) && !ec) {
      std::filesystem::remove(dir.parent_path(), ec);
    }
  }
};

CallRecord record_from(std::int64_t agent, std::int64_t index, const Query& q,
                       const SubmitTrace& t, Ticks fallback_time) {
  CallRecord rec;
  rec.agent = agent;
  rec.index = index;
  rec.action = std::string(to_string(q.action_type));
  rec.created = rec.start = rec.end = fallback_time;
  if (!t.calls.empty()) {
    rec.created = t.calls.front()->created_time();
    rec.start = t.calls.front()->start_time().value_or(rec.created);
    rec.end = rec.created;
    for (const auto& c : t.calls) {
      rec.end = std::max(rec.end, c->end_time().value_or(rec.created));
      if (c->status() == LifecycleState::kDone) ++rec.syscalls;
    }
  }
  rec.ok = t.response.ok();
  rec.response = response_text(t.response);
  rec.response_hash = fnv1a64(rec.response);
  return rec;
}

}  // namespace

// ---------------------------------------------------------------------------

std::int64_t TokenDist::sample(double u) const {
  switch (kind) {
    case Kind::kFixed:
      return a;
    case Kind::kUniform:
      return a + std::min<std::int64_t>(b - a, static_cast<std::int64_t>(u * static_cast<double>(b - a + 1)));
    case Kind::kBimodal:
      return u < p_long ? b : a;
  }
  return a;
}

std::string TokenDist::describe() const {
  switch (kind) {
    case Kind::kFixed: return std::to_string(a);
    case Kind::kUniform: return "uniform(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::kBimodal: {
      std::ostringstream os;
      os << "bimodal(" << a << "," << b << "," << p_long << ")";
      return os.str();
    }
  }
  return "";
}

void TokenDist::validate(const std::string& key) const {
  if (a < 1 || b < 1) bad(key, "token counts must be >= 1");
  if (kind == Kind::kUniform && a > b) bad(key, "uniform bounds must satisfy a <= b");
  if (kind == Kind::kBimodal && (p_long < 0.0 || p_long > 1.0)) bad(key, "p_long must be in [0, 1]");
}

void WorkloadSpec::validate() const {
  if (num_agents < 0) bad("workload.agents", "must be >= 0");
  if (calls_per_agent < 0) bad("workload.calls_per_agent", "must be >= 0");
  prompt_tokens.validate("workload.prompt_tokens");
  output_tokens.validate("workload.output_tokens");
  for (double f : {chat_fraction, tool_use_fraction, file_operation_fraction}) {
    if (f < 0.0) bad("workload.chat_fraction", "fractions must be >= 0");
  }
  const double sum = chat_fraction + tool_use_fraction + file_operation_fraction;
  if (std::abs(sum - 1.0) > 1e-9) bad("workload.chat_fraction", "action fractions must sum to 1");
}

BenchConfig parse_bench_config(const json& doc) {
  BenchConfig out;
  out.kernel = parse_kernel_config(doc, {"workload.", "baseline."});
  for (const auto& [key, v] : doc.items()) {
    if (key == "workload.agents") {
      out.workload.num_agents = int_key(key, v);
    } else if (key == "workload.calls_per_agent") {
      out.workload.calls_per_agent = int_key(key, v);
    } else if (key == "workload.prompt_tokens") {
      out.workload.prompt_tokens = parse_dist(key, v);
    } else if (key == "workload.output_tokens") {
      out.workload.output_tokens = parse_dist(key, v);
    } else if (key == "workload.chat_fraction") {
      out.workload.chat_fraction = number_key(key, v);
    } else if (key == "workload.tool_use_fraction") {
      out.workload.tool_use_fraction = number_key(key, v);
    } else if (key == "workload.file_operation_fraction") {
      out.workload.file_operation_fraction = number_key(key, v);
    } else if (key == "workload.seed") {
      out.workload.seed = static_cast<std::uint64_t>(int_key(key, v));
    } else if (key == "baseline.retry_backoff") {
      out.baseline.retry_backoff = number_key(key, v);
      if (out.baseline.retry_backoff < 0) bad(key, "must be >= 0");
    } else if (key == "baseline.retry_limit") {
      const std::int64_t n = int_key(key, v);
      if (n < 0) bad(key, "must be >= 0");
      out.baseline.retry_limit = n;
    } else if (key.rfind("workload.", 0) == 0 || key.rfind("baseline.", 0) == 0) {
      bad(key, "unknown key");
    }
  }
  out.workload.validate();
  return out;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  return parse_bench_config(load_config_document(path));
}

namespace {

/// Lengths for every call of the workload, indexed agent * calls + index.
std::vector<std::int64_t> draw_lengths(const TokenDist& d, const WorkloadSpec& spec,
                                       std::uint64_t stream) {
  const std::int64_t total = spec.num_agents * spec.calls_per_agent;
  std::vector<std::int64_t> out(static_cast<std::size_t>(total));
  if (d.kind != TokenDist::Kind::kBimodal) {
    for (std::int64_t g = 0; g < total; ++g) {
      out[g] = d.sample(unit_interval(spec.seed, g / spec.calls_per_agent,
                                      g % spec.calls_per_agent, stream));
    }
    return out;
  }
  std::vector<std::pair<double, std::int64_t>> keys;
  for (std::int64_t g = 0; g < total; ++g) {
    keys.emplace_back(unit_interval(spec.seed, g / spec.calls_per_agent, g % spec.calls_per_agent, stream), g);
  }
  std::sort(keys.begin(), keys.end());
  const auto n_long = static_cast<std::size_t>(std::llround(d.p_long * static_cast<double>(total)));
  for (std::size_t r = 0; r < keys.size(); ++r) out[keys[r].second] = r < n_long ? d.b : d.a;
  return out;
}

Query make_query(const WorkloadSpec& spec, const KernelConfig& config, std::int64_t agent,
                 std::int64_t index, std::int64_t p, std::int64_t l) {
  const double u = unit_interval(spec.seed, agent, index, 3);
  const auto& vocab = SimCore::vocabulary();
  std::string prompt;
  for (std::int64_t w = 0; w < p; ++w) {
    if (w) prompt.push_back(' ');
    const std::uint64_t h = hash_combine(hash_combine(spec.seed, static_cast<std::uint64_t>(agent)),
                                         hash_combine(static_cast<std::uint64_t>(index),
                                                      static_cast<std::uint64_t>(w)));
    prompt += vocab[splitmix64(h) % vocab.size()];
  }

  Query q;
  q.generation.max_new_tokens = l;
  q.generation.min_new_tokens = l;
  if (u < spec.chat_fraction) {
    q.action_type = ActionType::kChat;
    q.messages.push_back(Message{"user", prompt});
  } else if (u < spec.chat_fraction + spec.tool_use_fraction) {
    if (config.tools.empty()) {
      throw KernelError(ErrorCode::kConfig, "workload.tool_use_fraction needs at least one entry in tools");
    }
    q.action_type = ActionType::kToolUse;
    q.messages.push_back(Message{"user", prompt});
    for (const auto& t : config.tools) q.tools.push_back(t.schema);
  } else {
    q.action_type = ActionType::kFileOperation;
    const std::string cmd = index % 2 == 0 ? "write notes\n" + prompt : "read notes";
    q.messages.push_back(Message{"user", cmd});
  }
  return q;
}

}  // namespace

WorkloadPlan plan_workload(const WorkloadSpec& spec, const KernelConfig& config) {
  spec.validate();
  const auto prompts = draw_lengths(spec.prompt_tokens, spec, 1);
  const auto outputs = draw_lengths(spec.output_tokens, spec, 2);
  WorkloadPlan plan(static_cast<std::size_t>(spec.num_agents));
  for (std::int64_t a = 0; a < spec.num_agents; ++a) {
    for (std::int64_t j = 0; j < spec.calls_per_agent; ++j) {
      const std::int64_t g = a * spec.calls_per_agent + j;
      plan[a].push_back(make_query(spec, config, a, j, prompts[g], outputs[g]));
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------

Metrics compute_metrics(std::string mode, std::int64_t num_agents, std::vector<CallRecord> calls) {
  Metrics m;
  m.mode = std::move(mode);
  m.num_agents = num_agents;
  std::sort(calls.begin(), calls.end(), [](const CallRecord& x, const CallRecord& y) {
    return std::tie(x.agent, x.index) < std::tie(y.agent, y.index);
  });
  m.calls = std::move(calls);
  if (m.calls.empty()) return m;

  Ticks first = m.calls.front().created;
  Ticks last = m.calls.front().end;
  std::vector<Ticks> waits;
  Ticks wait_sum = 0;
  for (const auto& c : m.calls) {
    first = std::min(first, c.created);
    last = std::max(last, c.end);
    m.completed_syscalls += c.syscalls;
    waits.push_back(c.wait());
    wait_sum += c.wait();
  }
  m.overall_time = last - first;
  if (m.overall_time > 0) {
    m.throughput = static_cast<double>(m.completed_syscalls) / ticks_to_units(m.overall_time);
  }
  m.wait_avg = ticks_to_units(wait_sum) / static_cast<double>(waits.size());
  std::sort(waits.begin(), waits.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(waits.size())));
  m.wait_p90 = ticks_to_units(waits[std::max<std::size_t>(rank, 1) - 1]);
  return m;
}

// ---------------------------------------------------------------------------

KernelRun run_kernel_mode(const KernelConfig& config, const WorkloadSpec& spec, Strategy strategy) {
  spec.validate();
  KernelConfig cfg = config;
  cfg.scheduler.strategy = strategy;
  cfg.storage_root = fresh_run_dir(config.storage_root);
  DirCleanup cleanup{cfg.storage_root};

  KernelRun out;
  const std::string mode(to_string(strategy));
  const std::int64_t n = spec.num_agents;
  if (n == 0 || spec.calls_per_agent == 0) {
    out.metrics = compute_metrics(mode, n, {});
    return out;
  }

  const WorkloadPlan plan = plan_workload(spec, cfg);
  auto kernel = bootstrap_kernel(cfg);
  std::vector<std::int64_t> aids;
  for (std::int64_t i = 0; i < n; ++i) aids.push_back(kernel->register_agent("agent_" + std::to_string(i)));

  // Each worker runs agents w, w+W, ...; a successor inherits the worker's
  // clock and is attached before its predecessor detaches, so the llm gate
  // never opens between them.
  const std::int64_t workers = std::min<std::int64_t>(n, cfg.scheduler.max_concurrent_agents);
  for (std::int64_t w = 0; w < workers; ++w) kernel->attach_agent(aids[w]);
  kernel->start();

  std::vector<std::vector<CallRecord>> per_agent(n);
  std::mutex err_mu;
  std::exception_ptr error;
  std::vector<std::thread> threads;
  for (std::int64_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      std::int64_t i = w;
      try {
        for (; i < n; i += workers) {
          const std::int64_t aid = aids[i];
          for (std::int64_t j = 0; j < spec.calls_per_agent; ++j) {
            const Query& q = plan[i][j];
            const Ticks before = kernel->agent_clock(aid);
            per_agent[i].push_back(record_from(i, j, q, kernel->submit_traced(aid, q), before));
          }
          if (i + workers < n) {
            const std::int64_t next = aids[i + workers];
            kernel->advance_agent_clock(next, kernel->agent_clock(aid));
            kernel->attach_agent(next);
          }
          kernel->detach_agent(aid);
        }
      } catch (...) {
        {
          std::lock_guard lock(err_mu);
          if (!error) error = std::current_exception();
        }
        for (; i < n; i += workers) kernel->detach_agent(aids[i]);
      }
    });
  }
  for (auto& t : threads) t.join();
  kernel->stop(true);
  if (error) std::rethrow_exception(error);

  std::vector<CallRecord> all;
  for (auto& v : per_agent) {
    for (auto& r : v) all.push_back(std::move(r));
  }
  out.trace = kernel->schedule_trace();
  out.dispatch_log = kernel->dispatch_log();
  out.metrics = compute_metrics(mode, n, std::move(all));
  return out;
}

// ---------------------------------------------------------------------------

Metrics run_baseline_mode(const KernelConfig& config, const WorkloadSpec& spec,
                          const BaselineConfig& baseline) {
  spec.validate();
  if (spec.chat_fraction != 1.0) {
    throw KernelError(ErrorCode::kValidation, "baseline mode runs chat-only workloads");
  }
  if (config.core.core_kind != CoreKind::kSimulated) {
    throw KernelError(ErrorCode::kConfig, "core.kind: baseline mode needs the simulated core");
  }
  const std::int64_t n = spec.num_agents;
  if (n == 0 || spec.calls_per_agent == 0) return compute_metrics("baseline", n, {});

  const WorkloadPlan plan = plan_workload(spec, config);
  SimCore core(config.core);
  const Ticks backoff = units_to_ticks(baseline.retry_backoff);

  struct AgentState {
    std::int64_t call = 0;
    Ticks created = 0;
    std::int64_t failures = 0;
    Query query;
    LlmRequest request;
  };
  struct Holder {
    std::int64_t agent;
    Ticks start;
    Ticks busy_until;
    SlotLease lease;
    std::string text;
  };

  std::vector<AgentState> agents(n);
  std::set<std::pair<Ticks, std::int64_t>> ready;
  std::set<std::int64_t> waiting;
  std::vector<Holder> holders;
  std::vector<CallRecord> records;
  std::uint64_t next_cid = 1;

  auto begin_call = [&](std::int64_t a, Ticks t) {
    AgentState& st = agents[a];
    st.query = plan[a][st.call];
    st.request = build_llm_request(st.query);
    st.created = t;
    st.failures = 0;
    ready.insert({t, a});
  };
  auto finish_call = [&](std::int64_t a, Ticks start, Ticks end, bool ok, const std::string& text) {
    AgentState& st = agents[a];
    CallRecord rec;
    rec.agent = a;
    rec.index = st.call;
    rec.action = "chat";
    rec.created = st.created;
    rec.start = start;
    rec.end = end;
    rec.syscalls = ok ? 1 : 0;
    rec.attempts = st.failures + 1;
    rec.ok = ok;
    rec.response = text;
    rec.response_hash = fnv1a64(text);
    records.push_back(std::move(rec));
    if (++st.call < spec.calls_per_agent) begin_call(a, end);
  };

  for (std::int64_t a = 0; a < n; ++a) begin_call(a, 0);

  auto first_release = [&]() -> Holder* {
    Holder* best = nullptr;
    for (auto& h : holders) {
      if (!best || std::tie(h.busy_until, h.agent) < std::tie(best->busy_until, best->agent)) best = &h;
    }
    return best;
  };

  while (!ready.empty() || !holders.empty()) {
    Holder* h = first_release();
    if (h && (ready.empty() || h->busy_until <= ready.begin()->first)) {
      const Ticks e = h->busy_until;
      const std::int64_t a = h->agent;
      const Ticks start = h->start;
      const std::string text = std::move(h->text);
      h->lease.release();
      holders.erase(holders.begin() + (h - holders.data()));
      for (std::int64_t w : waiting) ready.insert({e + backoff, w});
      waiting.clear();
      finish_call(a, start, e, true, text);
      continue;
    }

    const auto [t, a] = *ready.begin();
    ready.erase(ready.begin());
    AgentState& st = agents[a];
    SlotLease lease;
    try {
      lease = core.try_acquire_slot();
    } catch (const KernelError& e) {
      if (e.code() != ErrorCode::kCapacityExceeded) throw;
      // The failed attempt's prefill runs on the device before the
      // out-of-capacity error surfaces.
      const Ticks waste = static_cast<Ticks>(std::llround(
          config.core.failed_attempt_waste * static_cast<double>(core.prefill_tick_cost()) *
          static_cast<double>(core.prompt_token_count(st.request))));
      first_release()->busy_until += waste;
      ++st.failures;
      if (baseline.retry_limit && st.failures > *baseline.retry_limit) {
        --st.failures;
        finish_call(a, t, t, false, "llm: retry limit exceeded");
        continue;
      }
      waiting.insert(a);
      continue;
    }
    GenerateOutcome g = core.llm_generate(st.request, nullptr, Budget{}, SnapshotMode::kText, next_cid++);
    holders.push_back(Holder{a, t, t + g.cost, std::move(lease), g.generation().text});
  }
  return compute_metrics("baseline", n, std::move(records));
}

// ---------------------------------------------------------------------------

std::vector<SweepRow> sweep_agents(const KernelConfig& config, const WorkloadSpec& spec,
                                   Strategy strategy, const std::vector<std::int64_t>& counts) {
  if (!std::is_sorted(counts.begin(), counts.end())) {
    throw KernelError(ErrorCode::kValidation, "sweep counts must be ascending");
  }
  std::vector<SweepRow> rows;
  for (std::int64_t count : counts) {
    WorkloadSpec s = spec;
    s.num_agents = count;
    const Metrics m = run_kernel_mode(config, s, strategy).metrics;
    rows.push_back(SweepRow{count, ticks_to_units(m.overall_time), m.wait_avg});
  }
  return rows;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw KernelError(ErrorCode::kValidation, "x and y differ in length");
  const std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 2) {
    throw KernelError(ErrorCode::kValidation, "linear fit needs at least two distinct x values");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r2 = syy == 0 ? (ss_res == 0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
  return f;
}

LinearFit fit_linear(const std::vector<SweepRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(static_cast<double>(r.agents));
    y.push_back(r.overall_time);
  }
  return fit_linear(x, y);
}

// ---------------------------------------------------------------------------

json metrics_to_json(const Metrics& m) {
  json calls = json::array();
  for (const auto& c : m.calls) {
    calls.push_back(json{{"agent", c.agent},
                         {"index", c.index},
                         {"action", c.action},
                         {"created", ticks_to_units(c.created)},
                         {"start", ticks_to_units(c.start)},
                         {"end", ticks_to_units(c.end)},
                         {"wait", ticks_to_units(c.wait())},
                         {"status", c.ok ? "ok" : "failed"},
                         {"attempts", c.attempts},
                         {"syscalls", c.syscalls},
                         {"response_hash", hex64(c.response_hash)}});
  }
  json summary{{"mode", m.mode},
               {"agents", m.num_agents},
               {"queries", m.calls.size()},
               {"overall_time", ticks_to_units(m.overall_time)},
               {"completed_syscalls", m.completed_syscalls},
               {"throughput", m.throughput},
               {"wait_avg", m.wait_avg},
               {"wait_p90", m.wait_p90}};
  return json{{"summary", summary}, {"calls", calls}};
}

std::string metrics_to_csv(const Metrics& m) {
  std::ostringstream os;
  os << "agent,index,action,created,start,end,wait,status,attempts,syscalls,response_hash\n";
  for (const auto& c : m.calls) {
    os << c.agent << ',' << c.index << ',' << c.action << ',' << format_ticks(c.created) << ','
       << format_ticks(c.start) << ',' << format_ticks(c.end) << ',' << format_ticks(c.wait()) << ','
       << (c.ok ? "ok" : "failed") << ',' << c.attempts << ',' << c.syscalls << ','
       << hex64(c.response_hash) << '\n';
  }
  return os.str();
}

void emit_report(const Metrics& m, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  std::string body;
  if (ext == ".json") {
    body = metrics_to_json(m).dump(2) + "\n";
  } else if (ext == ".csv") {
    body = metrics_to_csv(m);
  } else {
    throw KernelError(ErrorCode::kValidation, "report must end in .json or .csv: " + path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw KernelError(ErrorCode::kIo, "cannot write " + path.string());
  out << body;
  if (!out) throw KernelError(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace agentkern::bench
