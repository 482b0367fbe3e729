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

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "agentkern/access_manager.hpp"
#include "agentkern/context_manager.hpp"
#include "agentkern/http_core.hpp"
#include "agentkern/llm_core.hpp"
#include "agentkern/memory_manager.hpp"
#include "agentkern/scheduler.hpp"
#include "agentkern/tool_manager.hpp"

namespace agentkern {

/// One entry of the "tools" array.
struct ToolConfig {
  ToolSchema schema;
  std::int64_t max_parallel = 1;
  double cost_units = 0.0;
  /// Mock class; empty means snake_to_camel of the tool part of the name.
  std::string mock_class;
  double fail_probability = 0.5;
};

struct KernelConfig {
  SchedulerConfig scheduler;
  CoreConfig core;
  HttpCoreConfig http;
  SnapshotMode context_mode = SnapshotMode::kText;
  MemoryConfig memory;
  std::filesystem::path storage_root = "agentkern_data";
  AccessConfig access;
  bool tool_followup = false;
  std::chrono::microseconds tool_unit_duration{1000};
  std::vector<ToolConfig> tools;

  void validate() const;
};

/// Reads a JSON object from disk; kConfig on I/O or syntax errors.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Flat keys ("scheduler.strategy", "memory.threshold", ...) plus the "tools"
/// array. Keys under the prefixes in foreign_prefixes are skipped so other
/// components can share the document; any other unknown key is an error.
KernelConfig parse_kernel_config(const nlohmann::json& doc,
                                 const std::vector<std::string>& foreign_prefixes = {});

/// Every key parse_kernel_config understands, for docs and help output.
const std::vector<std::string>& kernel_config_keys();

}  // namespace agentkern
