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

#include "agentkern/config.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace agentkern {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw KernelError(ErrorCode::kConfig, key + ": " + what);
}

std::int64_t as_int(const std::string& key, const json& v) {
  if (!v.is_number_integer()) bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) bad(key, "expected a boolean");
  return v.get<bool>();
}

std::size_t as_size(const std::string& key, const json& v) {
  const std::int64_t n = as_int(key, v);
  if (n < 0) bad(key, "must be >= 0");
  return static_cast<std::size_t>(n);
}

using Setter = std::function<void(KernelConfig&, const std::string&, const json&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scheduler.strategy",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.scheduler.strategy = parse_strategy(as_string(k, v));
       }},
      {"scheduler.time_slice",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.scheduler.time_slice = as_int(k, v);
       }},
      {"scheduler.max_concurrent_agents",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.scheduler.max_concurrent_agents = as_int(k, v);
       }},
      {"core.kind",
       [](KernelConfig& c, const std::string& k, const json& v) {
         const std::string s = as_string(k, v);
         if (s == "sim") {
           c.core.core_kind = CoreKind::kSimulated;
         } else if (s == "http") {
           c.core.core_kind = CoreKind::kHttp;
         } else {
           bad(k, "must be sim or http, got '" + s + "'");
         }
       }},
      {"core.failed_attempt_waste",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.failed_attempt_waste = as_number(k, v);
       }},
      {"core.sim.slots",
       [](KernelConfig& c, const std::string& k, const json& v) { c.core.slots = as_int(k, v); }},
      {"core.sim.prefill_cost_per_token",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.prefill_cost_per_token = as_number(k, v);
       }},
      {"core.sim.decode_cost_per_token",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.decode_cost_per_token = as_number(k, v);
       }},
      {"core.sim.max_new_tokens",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.max_new_tokens = as_int(k, v);
       }},
      {"core.sim.beam_width",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.beam_width = as_int(k, v);
       }},
      {"core.sim.seed",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.seed = static_cast<std::uint64_t>(as_int(k, v));
       }},
      {"core.sim.tool_call_percent",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.core.tool_call_percent = as_int(k, v);
       }},
      {"core.http.url",
       [](KernelConfig& c, const std::string& k, const json& v) { c.http.url = as_string(k, v); }},
      {"core.http.path",
       [](KernelConfig& c, const std::string& k, const json& v) { c.http.path = as_string(k, v); }},
      {"core.http.model",
       [](KernelConfig& c, const std::string& k, const json& v) { c.http.model = as_string(k, v); }},
      {"core.http.api_key",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.http.api_key = as_string(k, v);
       }},
      {"core.http.max_new_tokens",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.http.max_new_tokens = as_int(k, v);
       }},
      {"core.http.timeout_ms",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.http.timeout = std::chrono::milliseconds(as_int(k, v));
       }},
      {"context.mode",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.context_mode = parse_snapshot_mode(as_string(k, v));
       }},
      {"memory.capacity_bytes",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.memory.capacity_bytes = as_size(k, v);
       }},
      {"memory.threshold",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.memory.threshold = as_number(k, v);
       }},
      {"memory.eviction_k",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.memory.eviction_k = as_size(k, v);
       }},
      {"storage.root",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.storage_root = as_string(k, v);
       }},
      {"access.irreversible_ops",
       [](KernelConfig& c, const std::string& k, const json& v) {
         if (!v.is_array()) bad(k, "expected an array of strings");
         c.access.irreversible_ops.clear();
         for (const auto& op : v) c.access.irreversible_ops.insert(as_string(k, op));
       }},
      {"access.noninteractive_default",
       [](KernelConfig& c, const std::string& k, const json& v) {
         const std::string s = as_string(k, v);
         if (s == "deny") {
           c.access.noninteractive_default = NonInteractivePolicy::kDeny;
         } else if (s == "allow") {
           c.access.noninteractive_default = NonInteractivePolicy::kAllow;
         } else {
           bad(k, "must be deny or allow, got '" + s + "'");
         }
       }},
      {"sdk.tool_followup",
       [](KernelConfig& c, const std::string& k, const json& v) {
         c.tool_followup = as_bool(k, v);
       }},
      {"tool.unit_duration_us",
       [](KernelConfig& c, const std::string& k, const json& v) {
         const std::int64_t us = as_int(k, v);
         if (us < 0) bad(k, "must be >= 0");
         c.tool_unit_duration = std::chrono::microseconds(us);
       }},
  };
  return table;
}

ParamSpec parse_param_spec(const std::string& key, const json& v) {
  if (!v.is_object()) bad(key, "expected an object");
  ParamSpec spec;
  for (const auto& [field, value] : v.items()) {
    const std::string k = key + "." + field;
    if (field == "type") {
      try {
        spec.type = parse_param_type(as_string(k, value));
      } catch (const KernelError& e) {
        bad(k, e.what());
      }
    } else if (field == "required") {
      spec.required = as_bool(k, value);
    } else if (field == "pattern") {
      spec.pattern = as_string(k, value);
    } else {
      bad(k, "unknown field");
    }
  }
  return spec;
}

ToolConfig parse_tool(std::size_t index, const json& v) {
  const std::string key = "tools[" + std::to_string(index) + "]";
  if (!v.is_object()) bad(key, "expected an object");
  ToolConfig tool;
  for (const auto& [field, value] : v.items()) {
    const std::string k = key + "." + field;
    if (field == "name") {
      tool.schema.name = as_string(k, value);
    } else if (field == "description") {
      tool.schema.description = as_string(k, value);
    } else if (field == "params") {
      if (!value.is_object()) bad(k, "expected an object");
      for (const auto& [pname, pspec] : value.items()) {
        tool.schema.params[pname] = parse_param_spec(k + "." + pname, pspec);
      }
    } else if (field == "max_parallel") {
      tool.max_parallel = as_int(k, value);
    } else if (field == "cost_units") {
      tool.cost_units = as_number(k, value);
    } else if (field == "mock") {
      tool.mock_class = as_string(k, value);
    } else if (field == "fail_probability") {
      tool.fail_probability = as_number(k, value);
    } else {
      bad(k, "unknown field");
    }
  }
  if (tool.schema.name.empty()) bad(key + ".name", "required");
  if (tool.max_parallel < 1) bad(key + ".max_parallel", "must be >= 1");
  if (tool.cost_units < 0) bad(key + ".cost_units", "must be >= 0");
  if (tool.fail_probability < 0 || tool.fail_probability > 1) {
    bad(key + ".fail_probability", "must be in [0, 1]");
  }
  try {
    validate_tool_schema(tool.schema);
  } catch (const KernelError& e) {
    bad(key + ".name", e.what());
  }
  return tool;
}

}  // namespace

void KernelConfig::validate() const {
  scheduler.validate();
  core.validate();
  memory.validate();
  if (storage_root.empty()) throw KernelError(ErrorCode::kConfig, "storage.root must be set");
  if (core.core_kind == CoreKind::kHttp && http.url.empty()) {
    throw KernelError(ErrorCode::kConfig, "core.http.url must be set");
  }
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw KernelError(ErrorCode::kConfig, "cannot open config file " + path.string());
  try {
    json doc = json::parse(in);
    if (!doc.is_object()) throw KernelError(ErrorCode::kConfig, "config root must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    throw KernelError(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

KernelConfig parse_kernel_config(const json& doc, const std::vector<std::string>& foreign_prefixes) {
  if (!doc.is_object()) throw KernelError(ErrorCode::kConfig, "config root must be an object");
  KernelConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    if (key == "tools") {
      if (!value.is_array()) bad(key, "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) config.tools.push_back(parse_tool(i, value[i]));
      continue;
    }
    auto it = table.find(key);
    if (it != table.end()) {
      it->second(config, key, value);
      continue;
    }
    bool foreign = false;
    for (const auto& p : foreign_prefixes) foreign = foreign || key.rfind(p, 0) == 0;
    if (!foreign) bad(key, "unknown key");
  }
  config.validate();
  return config;
}

const std::vector<std::string>& kernel_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    out.push_back("tools");
    return out;
  }();
  return keys;
}

}  // namespace agentkern
