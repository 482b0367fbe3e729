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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "agentkern/kernel.hpp"

namespace agentkern::bench {

/// Token-count distribution: fixed n, uniform integer in [a, b], or bimodal.
/// Bimodal output lengths are exact shares: round(p_long * total) calls of a
/// workload are long, picked by seeded rank.
struct TokenDist {
  enum class Kind { kFixed, kUniform, kBimodal };
  Kind kind = Kind::kFixed;
  std::int64_t a = 40;
  std::int64_t b = 40;
  double p_long = 0.0;

  static TokenDist fixed(std::int64_t n) { return {Kind::kFixed, n, n, 0.0}; }
  static TokenDist uniform(std::int64_t lo, std::int64_t hi) { return {Kind::kUniform, lo, hi, 0.0}; }
  static TokenDist bimodal(std::int64_t short_n, std::int64_t long_n, double p) {
    return {Kind::kBimodal, short_n, long_n, p};
  }

  /// u is uniform in [0, 1).
  std::int64_t sample(double u) const;
  std::string describe() const;
  void validate(const std::string& key) const;
};

struct WorkloadSpec {
  std::int64_t num_agents = 100;
  std::int64_t calls_per_agent = 2;
  TokenDist prompt_tokens = TokenDist::fixed(40);
  TokenDist output_tokens = TokenDist::bimodal(20, 200, 0.1);
  double chat_fraction = 1.0;
  double tool_use_fraction = 0.0;
  double file_operation_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Trial-and-error baseline knobs.
struct BaselineConfig {
  double retry_backoff = 1.0;                // model units
  std::optional<std::int64_t> retry_limit;  // failed attempts per call; unset = unlimited
};

/// One agent query (all syscalls it decomposed into).
struct CallRecord {
  std::int64_t agent = 0;  // 0-based agent index within the workload
  std::int64_t index = 0;  // 0-based query index within the agent
  std::string action;
  Ticks created = 0;
  Ticks start = 0;
  Ticks end = 0;
  std::int64_t syscalls = 0;  // completed syscalls
  std::int64_t attempts = 1;  // baseline: failed attempts + 1
  bool ok = true;
  std::uint64_t response_hash = 0;
  std::string response;

  Ticks wait() const { return end - created; }
};

struct Metrics {
  std::string mode;
  std::int64_t num_agents = 0;
  Ticks overall_time = 0;
  std::int64_t completed_syscalls = 0;
  double throughput = 0.0;  // completed syscalls per model unit
  double wait_avg = 0.0;    // model units
  double wait_p90 = 0.0;    // model units, nearest rank
  std::vector<CallRecord> calls;
};

/// Summary statistics over records; calls are sorted by (agent, index).
Metrics compute_metrics(std::string mode, std::int64_t num_agents, std::vector<CallRecord> calls);

struct BenchConfig {
  KernelConfig kernel;
  WorkloadSpec workload;
  BaselineConfig baseline;
};

/// Kernel keys plus workload.* and baseline.* keys.
BenchConfig parse_bench_config(const nlohmann::json& doc);
BenchConfig load_bench_config(const std::filesystem::path& path);

/// Every query of the workload; plan[agent][index].
using WorkloadPlan = std::vector<std::vector<Query>>;
WorkloadPlan plan_workload(const WorkloadSpec& spec, const KernelConfig& config);

struct KernelRun {
  Metrics metrics;
  ScheduleTrace trace;
  std::vector<DispatchRecord> dispatch_log;
};

/// Boots a kernel with the given strategy, runs every agent on its own
/// submitter thread (at most scheduler.max_concurrent_agents at once) and
/// drains. Storage lives in a fresh directory under storage.root that is
/// removed afterwards.
KernelRun run_kernel_mode(const KernelConfig& config, const WorkloadSpec& spec, Strategy strategy);

/// Agents call the core directly; a call that finds every slot taken fails,
/// burns failed_attempt_waste * prefill of device time on the slot holder and
/// retries retry_backoff after the next release. Simulated as discrete events
/// in model time. Chat workloads only.
Metrics run_baseline_mode(const KernelConfig& config, const WorkloadSpec& spec,
                          const BaselineConfig& baseline);

struct SweepRow {
  std::int64_t agents = 0;
  double overall_time = 0.0;
  double wait_avg = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Kernel mode per agent count; calls_per_agent stays fixed so total work
/// scales with N. Counts must be ascending.
std::vector<SweepRow> sweep_agents(const KernelConfig& config, const WorkloadSpec& spec,
                                   Strategy strategy, const std::vector<std::int64_t>& counts);

/// Least squares of y on x. Throws kValidation with fewer than two distinct x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);
LinearFit fit_linear(const std::vector<SweepRow>& rows);

nlohmann::json metrics_to_json(const Metrics& m);
std::string metrics_to_csv(const Metrics& m);
/// Format from the extension: .json or .csv (kValidation otherwise).
void emit_report(const Metrics& m, const std::filesystem::path& path);

}  // namespace agentkern::bench
