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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentkern/types.hpp"

namespace agentkern {

class Tool {
 public:
  virtual ~Tool() = default;
  /// Returns the tool's textual result; throws KernelError on failure.
  virtual std::string run(const Params& params) = 0;
};

using ToolFactory = std::function<std::unique_ptr<Tool>()>;

struct ToolRegistration {
  ToolSchema schema;
  std::int64_t max_parallel = 1;
  double cost_model_units = 0.0;
  ToolFactory factory;
};

/// "hotel_location_search" -> "HotelLocationSearch".
std::string snake_to_camel(std::string_view s);

/// Knobs for the built-in mock tools.
struct MockToolOptions {
  double cost_units = 0.0;
  std::chrono::microseconds unit_duration{1000};  // wall time per cost unit
  double fail_probability = 0.5;
  std::uint64_t seed = 0;
};

/// Mock tool classes by CamelCase class name: Echo, Delay, Fail, Counter.
/// Returns an empty factory for unknown names.
ToolFactory mock_tool_factory(std::string_view class_name, const MockToolOptions& options);

/// Tool registry plus the conflict map that caps in-flight runs per tool.
class ToolManager {
 public:
  void register_tool(ToolRegistration reg);
  bool has_tool(std::string_view name) const;
  /// Throws kUnknownTool.
  const ToolRegistration& lookup(std::string_view name) const;
  std::vector<std::string> tool_names() const;

  /// Resolves "org/tool_name" through the registry and instantiates it.
  std::unique_ptr<Tool> load_tool_instance(std::string_view name) const;

  /// Required params present, types and patterns match, unknown params
  /// rejected. Integers are widened where a number is expected. Throws
  /// kValidation naming the offending parameter.
  static Params validate_params(const ToolSchema& schema, const Params& params);

  /// Waits for a free slot under the tool's parallel limit, then runs it.
  Response tool_run(const ToolCall& call);

  /// Non-blocking reservation used by the scheduler's skip-scan. Unknown tools
  /// always reserve so they can fail immediately.
  bool try_reserve(std::string_view name);
  /// Runs a call reserved with try_reserve and releases the reservation.
  Response run_reserved(const ToolCall& call);

  /// Index of the earliest call whose tool is under its limit.
  std::optional<std::size_t> first_runnable(const std::vector<std::string>& names) const;

  std::int64_t running(std::string_view name) const;
  std::int64_t peak(std::string_view name) const;
  void reset_peaks();

 private:
  bool under_limit_locked(const std::string& name) const;
  void release(const std::string& name);
  Response execute(const ToolCall& call);

  mutable std::mutex mu_;
  std::condition_variable released_;
  std::map<std::string, ToolRegistration, std::less<>> registry_;
  std::map<std::string, std::int64_t, std::less<>> running_;  // the conflict map
  std::map<std::string, std::int64_t, std::less<>> peak_;
};

}  // namespace agentkern
