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

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Usage: acceptance <path-to-bench-executable>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "agentkern/bench.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace agentkern;
using namespace agentkern::bench;
using testutil::TempDir;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

KernelConfig base_config(const std::filesystem::path& root) {
  KernelConfig c;
  c.storage_root = root;
  return c;
}

// 1. Baseline over FIFO on W1.
Outcome scheduling_beats_retry() {
  TempDir dir;
  const KernelConfig cfg = base_config(dir.path());
  const WorkloadSpec w1;
  const Metrics fifo = run_kernel_mode(cfg, w1, Strategy::kFifo).metrics;
  const Metrics base = run_baseline_mode(cfg, w1, BaselineConfig{1.0, std::nullopt});
  const double ratio = static_cast<double>(base.overall_time) / static_cast<double>(fifo.overall_time);
  return {ratio >= 1.5, "baseline/fifo = " + fmt(ratio)};
}

// 2. Ordering of overall time and p90 wait.
Outcome ordering() {
  TempDir dir;
  const KernelConfig cfg = base_config(dir.path());
  const WorkloadSpec w1;
  const Metrics fifo = run_kernel_mode(cfg, w1, Strategy::kFifo).metrics;
  const Metrics rr = run_kernel_mode(cfg, w1, Strategy::kRr).metrics;
  const Metrics base = run_baseline_mode(cfg, w1, BaselineConfig{});
  const bool ok = fifo.overall_time <= rr.overall_time && rr.overall_time <= base.overall_time &&
                  rr.wait_p90 <= fifo.wait_p90;
  return {ok, "overall fifo " + fmt(ticks_to_units(fifo.overall_time)) + " rr " +
                  fmt(ticks_to_units(rr.overall_time)) + " baseline " +
                  fmt(ticks_to_units(base.overall_time)) + "; p90 rr " + fmt(rr.wait_p90) +
                  " fifo " + fmt(fifo.wait_p90)};
}

// 3. RR slice 8 output equals FIFO output per call over 50 seeds.
Outcome context_switch() {
  TempDir dir;
  KernelConfig cfg = base_config(dir.path());
  cfg.scheduler.time_slice = 8;
  std::int64_t mismatches = 0, compared = 0, preempted = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    WorkloadSpec w;
    w.seed = seed;
    const Metrics f = run_kernel_mode(cfg, w, Strategy::kFifo).metrics;
    const KernelRun r = run_kernel_mode(cfg, w, Strategy::kRr);
    std::map<std::pair<std::int64_t, std::int64_t>, std::string> fifo_text;
    for (const auto& c : f.calls) fifo_text[{c.agent, c.index}] = c.response;
    for (const auto& c : r.metrics.calls) {
      ++compared;
      mismatches += fifo_text.at({c.agent, c.index}) != c.response;
    }
    for (const auto& e : r.trace.events) preempted += e.type == TraceEventType::kPreempt;
  }
  return {mismatches == 0 && compared == 50 * 200 && preempted > 0,
          std::to_string(compared) + " calls, " + std::to_string(preempted) + " preemptions, " +
              std::to_string(mismatches) + " mismatches"};
}

// 4. Suspend at every token boundary of a 40-token generation.
Outcome interruption_sweep() {
  CoreConfig cc;
  cc.seed = 9;
  SimCore core(cc);
  std::int64_t mismatches = 0, runs = 0;
  for (std::int64_t beam : {1, 3}) {
    LlmRequest req;
    req.messages.push_back({"user", "summarize the quarterly travel expenses for the team"});
    req.params.max_new_tokens = 40;
    req.params.min_new_tokens = 40;
    req.params.beam_width = beam;
    for (SnapshotMode mode : {SnapshotMode::kText, SnapshotMode::kBeam}) {
      const std::string expected = core.llm_generate(req, nullptr, {}, mode, 1).generation().text;
      for (std::int64_t k = 1; k <= 39; ++k) {
        ContextManager context(mode);
        Budget b;
        b.decode_tokens = k;
        const auto first = core.llm_generate(req, nullptr, b, mode, 1);
        ++runs;
        if (!first.suspended() || first.snapshot().tokens_done != k) {
          ++mismatches;
          continue;
        }
        context.gen_snapshot(1, first.snapshot());
        const auto restored = context.gen_restore(1);
        const auto rest = core.llm_generate(req, &*restored, {}, mode, 1);
        mismatches += rest.generation().text != expected;
      }
    }
  }
  return {mismatches == 0 && runs == 4 * 39,
          std::to_string(runs) + " interruptions, " + std::to_string(mismatches) + " mismatches"};
}

// 5. Linear scaling of overall time with agent count.
Outcome linearity() {
  TempDir dir;
  const auto rows = sweep_agents(base_config(dir.path()), WorkloadSpec{}, Strategy::kFifo,
                                 {25, 50, 100, 200});
  const LinearFit fit = fit_linear(rows);
  return {fit.r2 >= 0.98, "R^2 = " + fmt(fit.r2) + ", slope " + fmt(fit.slope)};
}

// 6. Memory manager against a reference map and a K-LRU oracle.
Outcome memory_oracle() {
  TempDir dir;
  StorageManager storage(dir.path());
  MemoryConfig mc;
  mc.capacity_bytes = 4096;
  mc.threshold = 0.8;
  mc.eviction_k = 2;
  MemoryManager mm(mc, storage);
  const std::size_t limit = mc.limit_bytes();

  std::vector<EvictionEvent> events;
  mm.set_eviction_observer([&](const EvictionEvent& e) { events.push_back(e); });

  struct Resident {
    std::size_t size;
    std::uint64_t recency;
  };
  std::map<std::int64_t, std::map<std::int64_t, std::string>> reference;
  std::map<std::int64_t, std::map<std::int64_t, Resident>> resident;
  std::map<std::int64_t, std::size_t> used;
  std::uint64_t clock = 0;

  std::mt19937_64 rng(2026);
  std::int64_t bad_reads = 0, bad_evictions = 0, threshold_violations = 0, total_evictions = 0;
  for (int op = 0; op < 10000; ++op) {
    const std::int64_t aid = 1 + static_cast<std::int64_t>(rng() % 20);
    const std::int64_t rid = static_cast<std::int64_t>(rng() % 24);
    if (rng() % 5 < 3) {
      const std::string s = testutil::random_utf8(rng, 700);
      const std::size_t size = default_codec().encode(s).size();
      events.clear();
      mm.mem_write(aid, rid, s);
      reference[aid][rid] = s;
      auto& res = resident[aid];
      if (auto it = res.find(rid); it != res.end()) used[aid] -= it->second.size;
      res[rid] = Resident{size, ++clock};
      used[aid] += size;
      // Brute force: each trigger evicts the K oldest records other than rid.
      std::vector<std::vector<std::int64_t>> expected;
      while (used[aid] > limit) {
        std::vector<std::pair<std::uint64_t, std::int64_t>> order;
        for (const auto& [r, meta] : res) {
          if (r != rid) order.emplace_back(meta.recency, r);
        }
        std::sort(order.begin(), order.end());
        std::vector<std::int64_t> victims;
        for (std::size_t i = 0; i < std::min(order.size(), mc.eviction_k); ++i) {
          victims.push_back(order[i].second);
          used[aid] -= res.at(order[i].second).size;
          res.erase(order[i].second);
        }
        expected.push_back(victims);
      }
      total_evictions += static_cast<std::int64_t>(events.size());
      if (expected.size() != events.size()) {
        ++bad_evictions;
      } else {
        for (std::size_t i = 0; i < events.size(); ++i) bad_evictions += events[i].evicted != expected[i];
      }
      if (mm.used_bytes(aid) > limit || mm.used_bytes(aid) != used[aid]) ++threshold_violations;
    } else {
      const auto ref = reference[aid].find(rid);
      try {
        const std::string got = mm.mem_read(aid, rid);
        bad_reads += ref == reference[aid].end() || got != ref->second;
        if (auto it = resident[aid].find(rid); it != resident[aid].end()) it->second.recency = ++clock;
      } catch (const KernelError& e) {
        bad_reads += !(ref == reference[aid].end() && e.code() == ErrorCode::kNotFound);
      }
    }
  }
  return {bad_reads == 0 && bad_evictions == 0 && threshold_violations == 0 && total_evictions > 0,
          std::to_string(total_evictions) + " eviction events; mismatched reads " +
              std::to_string(bad_reads) + ", evictions " + std::to_string(bad_evictions) +
              ", threshold " + std::to_string(threshold_violations)};
}

// 7. Compression and persistence round trip, plus the shared-prefix ratio.
Outcome compression() {
  TempDir dir;
  std::mt19937_64 rng(7);
  std::vector<std::string> texts;
  {
    StorageManager sm(dir.path());
    for (int i = 0; i < 10000; ++i) {
      texts.push_back(testutil::random_utf8(rng, 4096));
      sm.sto_write("", texts.back(), 1, i);
    }
  }
  StorageManager reopened(dir.path());
  std::int64_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) mismatches += reopened.sto_read("", 1, i) != texts[i];

  std::string prefix;
  for (int i = 0; prefix.size() < 800; ++i) prefix += "agent" + std::to_string(i % 7) + " step ";
  prefix.resize(800);
  std::size_t raw = 0, packed = 0;
  for (int i = 0; i < 100; ++i) {
    std::string s = prefix;
    while (s.size() < 1000) s.push_back(static_cast<char>('a' + rng() % 26));
    raw += s.size();
    packed += default_codec().encode(s).size();
  }
  const double ratio = static_cast<double>(packed) / static_cast<double>(raw);
  return {mismatches == 0 && ratio < 0.5,
          std::to_string(mismatches) + " mismatches of 10000; prefix corpus ratio " + fmt(ratio)};
}

// 8. Peak tool concurrency under 64 simultaneous calls.
Outcome tool_conflicts() {
  std::string detail;
  bool ok = true;
  for (std::int64_t limit : {1, 4}) {
    ToolManager tm;
    MockToolOptions o;
    o.cost_units = 5;
    o.unit_duration = std::chrono::microseconds(1000);
    ToolRegistration reg;
    reg.schema.name = "demo/delay";
    reg.max_parallel = limit;
    reg.factory = mock_tool_factory("Delay", o);
    tm.register_tool(reg);
    std::atomic<int> completed{0};
    std::vector<std::thread> ts;
    for (int i = 0; i < 64; ++i) {
      ts.emplace_back([&] {
        if (tm.tool_run({"demo/delay", {}}).ok()) ++completed;
      });
    }
    for (auto& t : ts) t.join();
    const bool this_ok = tm.peak("demo/delay") == limit && completed == 64 && tm.running("demo/delay") == 0;
    ok = ok && this_ok;
    if (!detail.empty()) detail += "; ";
    detail += "limit " + std::to_string(limit) + ": peak " + std::to_string(tm.peak("demo/delay")) +
              ", completed " + std::to_string(completed.load());
  }
  return {ok, detail};
}

// 9. Access oracle and gating of foreign clears at the facade.
Outcome access_oracle() {
  AccessManager am;
  for (int i = 1; i <= 40; ++i) am.register_agent(i);
  std::map<std::int64_t, std::set<std::int64_t>> oracle;
  std::mt19937_64 rng(99);
  std::int64_t disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t s = 1 + static_cast<std::int64_t>(rng() % 40);
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 40);
    if (rng() % 3 == 0) {
      am.add_privilege(s, t);
      oracle[t].insert(s);
    } else {
      disagreements += am.check_access(s, t) != (s == t || oracle[t].count(s) != 0);
    }
  }

  TempDir dir;
  KernelConfig cfg = testutil::decode_only_config(dir.path());
  std::bernoulli_distribution coin(0.5);
  Kernel k(cfg, [&](const std::string&) { return std::optional<std::string>(coin(rng) ? "yes" : "no"); });
  std::vector<std::int64_t> agents;
  for (int i = 0; i < 6; ++i) agents.push_back(k.register_agent("agent" + std::to_string(i)));
  k.start();
  auto file_query = [](const std::string& text) {
    Query q;
    q.messages.push_back({"user", text});
    q.action_type = ActionType::kFileOperation;
    return q;
  };
  std::int64_t ungated = 0, foreign_clears = 0, succeeded = 0;
  for (int i = 0; i < 300; ++i) {
    const std::int64_t sid = agents[rng() % agents.size()];
    const std::int64_t tid = agents[rng() % agents.size()];
    switch (rng() % 4) {
      case 0:
        k.add_privilege(sid, tid);
        break;
      case 1:
        k.submit(tid, file_query("write f\npayload " + std::to_string(i)));
        k.mem_write(tid, 1, "memo " + std::to_string(i));
        break;
      default: {
        if (sid == tid) break;
        const std::size_t before = k.audit_log().size();
        const Response r = rng() % 2 ? k.submit(sid, file_query("clear f @" + std::to_string(tid)))
                                     : k.mem_clear(sid, tid);
        const auto log = k.audit_log();
        ++foreign_clears;
        const bool audited = log.size() == before + 1 && log.back().sid == sid && log.back().tid == tid;
        if (r.ok()) {
          ++succeeded;
          ungated += !(audited && log.back().access_checked && log.back().access_granted &&
                       log.back().consent_asked && log.back().consent_granted);
        } else {
          ungated += !audited;
        }
      }
    }
  }
  k.stop();
  return {disagreements == 0 && ungated == 0 && succeeded > 0,
          std::to_string(disagreements) + " disagreements; " + std::to_string(foreign_clears) +
              " foreign clears (" + std::to_string(succeeded) + " allowed), " +
              std::to_string(ungated) + " ungated"};
}

// 10. Two bench runs with the same seed write identical JSON.
Outcome determinism(const std::string& bench_exe) {
  TempDir dir;
  const auto cfg_path = dir.path() / "bench.json";
  {
    std::ofstream out(cfg_path);
    out << nlohmann::json{{"storage.root", (dir.path() / "data").string()},
                          {"scheduler.strategy", "rr"}}
               .dump();
  }
  auto run = [&](const std::string& report) {
    const std::string cmd = "\"" + bench_exe + "\" run --config \"" + cfg_path.string() +
                            "\" --seed 17 --mode rr --report \"" + (dir.path() / report).string() +
                            "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  if (run("a.json") != 0 || run("b.json") != 0) return {false, "bench run failed"};
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir.path() / name, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string a = slurp("a.json"), b = slurp("b.json");
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical = " + (a == b ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <bench-executable>\n";
    return 2;
  }
  const std::string bench_exe = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"scheduling beats trial-and-error", scheduling_beats_retry},
      {"fifo <= rr <= baseline, rr p90 <= fifo p90", ordering},
      {"rr output equals fifo output over 50 seeds", context_switch},
      {"interruption at every token boundary", interruption_sweep},
      {"overall time linear in agent count", linearity},
      {"memory manager oracle", memory_oracle},
      {"compression and storage round trip", compression},
      {"tool concurrency limits", tool_conflicts},
      {"access oracle and clear gating", access_oracle},
      {"bench reports are deterministic", [&] { return determinism(bench_exe); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("[%s] %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
