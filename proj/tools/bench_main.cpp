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

// bench: workload runner for the agent kernel.
//
//   bench run    --config cfg.json --mode fifo --agents 100 --calls-per-agent 2 --seed 7 --report out.json
//   bench sweep  --config cfg.json --counts 25,50,100,200
//   bench ablate --config cfg.json

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "agentkern/bench.hpp"

using namespace agentkern;
using namespace agentkern::bench;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::int64_t> agents;
  std::optional<std::int64_t> calls;
  std::optional<std::uint64_t> seed;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file (flat dotted keys)");
  cmd->add_option("--agents", o.agents, "number of agents");
  cmd->add_option("--calls-per-agent", o.calls, "queries per agent");
  cmd->add_option("--seed", o.seed, "workload seed");
}

BenchConfig resolve(const Overrides& o) {
  BenchConfig cfg = o.config.empty() ? parse_bench_config(nlohmann::json::object())
                                     : load_bench_config(o.config);
  if (o.agents) cfg.workload.num_agents = *o.agents;
  if (o.calls) cfg.workload.calls_per_agent = *o.calls;
  if (o.seed) cfg.workload.seed = *o.seed;
  cfg.workload.validate();
  return cfg;
}

Metrics run_mode(const BenchConfig& cfg, const std::string& mode) {
  if (mode == "baseline") return run_baseline_mode(cfg.kernel, cfg.workload, cfg.baseline);
  return run_kernel_mode(cfg.kernel, cfg.workload, parse_strategy(mode)).metrics;
}

void print_row(const Metrics& m) {
  std::printf("%-9s %14.3f %12.4f %12.3f %12.3f\n", m.mode.c_str(), ticks_to_units(m.overall_time),
              m.throughput, m.wait_avg, m.wait_p90);
}

void print_header() {
  std::printf("%-9s %14s %12s %12s %12s\n", "mode", "overall_time", "throughput", "wait_avg",
              "wait_p90");
}

std::vector<std::int64_t> parse_counts(const std::string& s) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (piece.empty()) throw CLI::ValidationError("--counts", "empty entry");
    out.push_back(std::stoll(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent kernel benchmark harness"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_mode_name;  // empty: scheduler.strategy from the config
  std::vector<std::string> reports;
  auto* run = app.add_subcommand("run", "run one mode and optionally write reports");
  add_overrides(run, run_o);
  run->add_option("--mode", run_mode_name, "fifo, rr or baseline (default: scheduler.strategy)")
      ->check(CLI::IsMember({"fifo", "rr", "baseline"}));
  run->add_option("--report", reports, "report path(s), .json or .csv");

  Overrides sweep_o;
  std::string counts = "25,50,100,200";
  std::string sweep_mode;
  auto* sweep = app.add_subcommand("sweep", "overall time against agent count, with a linear fit");
  add_overrides(sweep, sweep_o);
  sweep->add_option("--counts", counts, "ascending agent counts, comma separated");
  sweep->add_option("--mode", sweep_mode, "fifo or rr (default: scheduler.strategy)")->check(CLI::IsMember({"fifo", "rr"}));

  Overrides ablate_o;
  auto* ablate = app.add_subcommand("ablate", "baseline vs FIFO vs RR on one workload");
  add_overrides(ablate, ablate_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const BenchConfig cfg = resolve(run_o);
      if (run_mode_name.empty()) run_mode_name = std::string(to_string(cfg.kernel.scheduler.strategy));
      const Metrics m = run_mode(cfg, run_mode_name);
      print_header();
      print_row(m);
      for (const auto& r : reports) emit_report(m, r);
    } else if (*sweep) {
      const BenchConfig cfg = resolve(sweep_o);
      const Strategy strategy = sweep_mode.empty() ? cfg.kernel.scheduler.strategy : parse_strategy(sweep_mode);
      const auto rows = sweep_agents(cfg.kernel, cfg.workload, strategy,
                                     parse_counts(counts));
      std::printf("%8s %14s %12s\n", "agents", "overall_time", "wait_avg");
      for (const auto& r : rows) std::printf("%8lld %14.3f %12.3f\n", static_cast<long long>(r.agents), r.overall_time, r.wait_avg);
      if (rows.size() >= 2) {
        const LinearFit f = fit_linear(rows);
        std::printf("fit: overall_time = %.4f * N + %.4f  (R^2 = %.6f)\n", f.slope, f.intercept, f.r2);
      }
    } else if (*ablate) {
      const BenchConfig cfg = resolve(ablate_o);
      print_header();
      const Metrics base = run_mode(cfg, "baseline");
      const Metrics fifo = run_mode(cfg, "fifo");
      const Metrics rr = run_mode(cfg, "rr");
      print_row(base);
      print_row(fifo);
      print_row(rr);
      if (fifo.overall_time > 0) {
        std::printf("baseline/fifo overall_time ratio: %.3f\n",
                    static_cast<double>(base.overall_time) / static_cast<double>(fifo.overall_time));
      }
    }
  } catch (const KernelError& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
