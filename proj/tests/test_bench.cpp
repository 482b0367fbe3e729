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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "agentkern/bench.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace agentkern;
using namespace agentkern::bench;
using testutil::TempDir;

namespace {

WorkloadSpec two_jobs(std::uint64_t seed) {
  WorkloadSpec w;
  w.num_agents = 2;
  w.calls_per_agent = 1;
  w.prompt_tokens = TokenDist::fixed(3);
  w.output_tokens = TokenDist::bimodal(10, 30, 0.5);
  w.seed = seed;
  return w;
}

WorkloadSpec small(std::int64_t agents, std::uint64_t seed = 0) {
  WorkloadSpec w;
  w.num_agents = agents;
  w.calls_per_agent = 2;
  w.prompt_tokens = TokenDist::fixed(10);
  w.output_tokens = TokenDist::uniform(5, 25);
  w.seed = seed;
  return w;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::uint64_t> hashes(const Metrics& m) {
  std::vector<std::uint64_t> out;
  for (const auto& c : m.calls) out.push_back(c.response_hash);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("the two-job examples through the harness") {
  TempDir dir;
  KernelConfig cfg = testutil::decode_only_config(dir.path());
  cfg.scheduler.time_slice = 10;
  // Pick the seed whose long job lands on the first agent.
  std::optional<WorkloadSpec> spec;
  for (std::uint64_t seed = 0; seed < 16 && !spec; ++seed) {
    const auto plan = plan_workload(two_jobs(seed), cfg);
    if (plan[0][0].generation.max_new_tokens == 30) spec = two_jobs(seed);
  }
  REQUIRE(spec.has_value());
  const Metrics fifo = run_kernel_mode(cfg, *spec, Strategy::kFifo).metrics;
  CHECK(fifo.wait_avg == doctest::Approx(35.0));
  CHECK(fifo.overall_time == 40 * kTicksPerUnit);
  const Metrics rr = run_kernel_mode(cfg, *spec, Strategy::kRr).metrics;
  CHECK(rr.wait_avg == doctest::Approx(30.0));
  CHECK(rr.wait_p90 == doctest::Approx(40.0));
}

TEST_CASE("exact bimodal shares") {
  TempDir dir;
  WorkloadSpec w;
  w.num_agents = 50;
  const auto plan = plan_workload(w, testutil::decode_only_config(dir.path()));
  int longs = 0;
  for (const auto& agent : plan) {
    for (const auto& q : agent) longs += q.generation.max_new_tokens == 200;
  }
  CHECK(longs == 10);  // 10% of 100 calls
}

TEST_CASE("zero agents give empty metrics") {
  TempDir dir;
  const auto cfg = testutil::decode_only_config(dir.path());
  const Metrics m = run_kernel_mode(cfg, small(0), Strategy::kFifo).metrics;
  CHECK(m.calls.empty());
  CHECK(m.overall_time == 0);
  CHECK(m.throughput == 0.0);
  CHECK(metrics_to_csv(m) ==
        "agent,index,action,created,start,end,wait,status,attempts,syscalls,response_hash\n");
}

TEST_CASE("one agent: baseline equals FIFO") {
  TempDir dir;
  const auto cfg = testutil::decode_only_config(dir.path());
  const Metrics fifo = run_kernel_mode(cfg, small(1), Strategy::kFifo).metrics;
  const Metrics base = run_baseline_mode(cfg, small(1), BaselineConfig{});
  CHECK(base.overall_time == fifo.overall_time);
  CHECK(base.wait_avg == fifo.wait_avg);
  CHECK(base.completed_syscalls == fifo.completed_syscalls);
}

TEST_CASE("contention makes the baseline slower") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  cfg.core.failed_attempt_waste = 1.0;
  const Metrics fifo = run_kernel_mode(cfg, small(2), Strategy::kFifo).metrics;
  const Metrics base = run_baseline_mode(cfg, small(2), BaselineConfig{});
  CHECK(base.overall_time > fifo.overall_time);
  CHECK(hashes(base) == hashes(fifo));
}

TEST_CASE("free retries converge to FIFO time") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  const Metrics fifo = run_kernel_mode(cfg, small(8), Strategy::kFifo).metrics;
  std::vector<double> gaps;
  for (double waste : {1.0, 0.5, 0.0}) {
    cfg.core.failed_attempt_waste = waste;
    const Metrics base = run_baseline_mode(cfg, small(8), BaselineConfig{waste, std::nullopt});
    gaps.push_back(ticks_to_units(base.overall_time - fifo.overall_time));
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[2] == doctest::Approx(0.0));
}

TEST_CASE("retry limit fails calls") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  const Metrics base = run_baseline_mode(cfg, small(6), BaselineConfig{1.0, 0});
  const auto failed = std::count_if(base.calls.begin(), base.calls.end(), [](auto& c) { return !c.ok; });
  CHECK(failed > 0);
  CHECK(base.completed_syscalls == static_cast<std::int64_t>(base.calls.size() - failed));
}

TEST_CASE("RR, FIFO and baseline return the same texts") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  const auto w = small(10, 4);
  const auto f = hashes(run_kernel_mode(cfg, w, Strategy::kFifo).metrics);
  CHECK(f == hashes(run_kernel_mode(cfg, w, Strategy::kRr).metrics));
  CHECK(f == hashes(run_baseline_mode(cfg, w, BaselineConfig{})));
}

TEST_CASE("mixed actions run in kernel mode") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  cfg.tools.push_back(testutil::echo_tool(2));
  cfg.core.tool_call_percent = 100;
  WorkloadSpec w = small(6);
  w.chat_fraction = 0.5;
  w.tool_use_fraction = 0.25;
  w.file_operation_fraction = 0.25;
  const Metrics m = run_kernel_mode(cfg, w, Strategy::kRr).metrics;
  CHECK(m.calls.size() == 12);
  for (const auto& c : m.calls) CHECK(c.ok);
  CHECK(m.completed_syscalls > 12);
  CHECK_THROWS_AS(run_baseline_mode(cfg, w, BaselineConfig{}), KernelError);
}

TEST_CASE("percentile and averages") {
  std::vector<CallRecord> calls;
  for (int i = 1; i <= 10; ++i) {
    CallRecord c;
    c.agent = i;
    c.created = 0;
    c.end = i * kTicksPerUnit;
    c.syscalls = 1;
    calls.push_back(c);
  }
  const Metrics m = compute_metrics("fifo", 10, calls);
  CHECK(m.wait_avg == doctest::Approx(5.5));
  CHECK(m.wait_p90 == doctest::Approx(9.0));
  CHECK(m.overall_time == 10 * kTicksPerUnit);
  CHECK(m.throughput == doctest::Approx(1.0));
}

TEST_CASE("linear fit") {
  const LinearFit f = fit_linear(std::vector<double>{25, 50, 100, 200},
                                 std::vector<double>{75, 150, 300, 600});
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(f.intercept == doctest::Approx(0.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_linear(std::vector<double>{5}, std::vector<double>{1}), KernelError);
  CHECK_THROWS_AS(fit_linear(std::vector<double>{5, 5}, std::vector<double>{1, 2}), KernelError);
}

TEST_CASE("kernel-mode sweep scales linearly") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path();
  WorkloadSpec w;
  const auto rows = sweep_agents(cfg, w, Strategy::kFifo, {10, 20, 40});
  REQUIRE(rows.size() == 3);
  CHECK(fit_linear(rows).r2 > 0.99);
  CHECK_THROWS_AS(sweep_agents(cfg, w, Strategy::kFifo, {20, 10}), KernelError);
}

TEST_CASE("reports: JSON schema and deterministic bytes") {
  TempDir dir;
  KernelConfig cfg;
  cfg.storage_root = dir.path() / "data";
  const auto w = small(5, 2);
  emit_report(run_kernel_mode(cfg, w, Strategy::kRr).metrics, dir.path() / "a.json");
  emit_report(run_kernel_mode(cfg, w, Strategy::kRr).metrics, dir.path() / "b.json");
  emit_report(run_kernel_mode(cfg, w, Strategy::kRr).metrics, dir.path() / "a.csv");
  emit_report(run_kernel_mode(cfg, w, Strategy::kRr).metrics, dir.path() / "b.csv");
  CHECK(slurp(dir.path() / "a.json") == slurp(dir.path() / "b.json"));
  CHECK(slurp(dir.path() / "a.csv") == slurp(dir.path() / "b.csv"));
  const auto doc = nlohmann::json::parse(slurp(dir.path() / "a.json"));
  CHECK(doc.at("summary").at("mode") == "rr");
  CHECK(doc.at("summary").at("queries") == 10);
  CHECK(doc.at("calls").size() == 10);
  CHECK(doc.at("calls")[0].at("response_hash").get<std::string>().size() == 16);
  CHECK(doc.at("summary").at("wait_avg").is_number());
  CHECK_THROWS_AS(emit_report(Metrics{}, dir.path() / "x.txt"), KernelError);
}

TEST_CASE("bench config parsing") {
  const BenchConfig c = parse_bench_config(
      {{"scheduler.strategy", "rr"},
       {"workload.agents", 7},
       {"workload.output_tokens", {{"bimodal", {20, 200, 0.1}}}},
       {"workload.prompt_tokens", {{"uniform", {5, 9}}}},
       {"baseline.retry_limit", 3}});
  CHECK(c.kernel.scheduler.strategy == Strategy::kRr);
  CHECK(c.workload.num_agents == 7);
  CHECK(c.workload.output_tokens.kind == TokenDist::Kind::kBimodal);
  CHECK(c.workload.prompt_tokens.b == 9);
  CHECK(c.baseline.retry_limit == std::optional<std::int64_t>{3});
  CHECK_THROWS_AS(parse_bench_config({{"workload.agents", -1}}), KernelError);
  CHECK_THROWS_AS(parse_bench_config({{"workload.chat_fraction", 0.5}}), KernelError);
  CHECK_THROWS_AS(parse_bench_config({{"workload.output_tokens", {{"uniform", {9, 5}}}}}), KernelError);
}
