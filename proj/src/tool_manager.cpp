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

#include "agentkern/tool_manager.hpp"

#include <cctype>
#include <regex>
#include <thread>

#include "agentkern/llm_core.hpp"

namespace agentkern {

std::string snake_to_camel(std::string_view s) {
  std::string out;
  bool upper = true;
  for (char c : s) {
    if (c == '_') {
      upper = true;
      continue;
    }
    // Title-casing lowercases the rest of each component.
    out.push_back(static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(c))
                                          : std::tolower(static_cast<unsigned char>(c))));
    upper = false;
  }
  return out;
}

namespace {

void busy_for(const MockToolOptions& o, double units) {
  if (units <= 0) return;
  std::this_thread::sleep_for(std::chrono::duration_cast<std::chrono::microseconds>(
      o.unit_duration * units));
}

class EchoTool final : public Tool {
 public:
  explicit EchoTool(MockToolOptions o) : o_(o) {}
  std::string run(const Params& params) override {
    busy_for(o_, o_.cost_units);
    if (auto it = params.find("s"); it != params.end()) return param_to_string(it->second);
    std::string out;
    for (const auto& [k, v] : params) {
      if (!out.empty()) out.push_back(' ');
      out += k + "=" + param_to_string(v);
    }
    return out;
  }

 private:
  MockToolOptions o_;
};

class DelayTool final : public Tool {
 public:
  explicit DelayTool(MockToolOptions o) : o_(o) {}
  std::string run(const Params& params) override {
    double units = o_.cost_units;
    if (auto it = params.find("n"); it != params.end()) {
      if (auto* i = std::get_if<std::int64_t>(&it->second)) units = static_cast<double>(*i);
      if (auto* d = std::get_if<double>(&it->second)) units = *d;
    }
    busy_for(o_, units);
    return "slept " + param_to_string(units);
  }

 private:
  MockToolOptions o_;
};

class FailTool final : public Tool {
 public:
  FailTool(MockToolOptions o, std::shared_ptr<std::atomic<std::uint64_t>> calls)
      : o_(o), calls_(std::move(calls)) {}
  std::string run(const Params& params) override {
    busy_for(o_, o_.cost_units);
    double p = o_.fail_probability;
    if (auto it = params.find("p"); it != params.end()) {
      if (auto* d = std::get_if<double>(&it->second)) p = *d;
      if (auto* i = std::get_if<std::int64_t>(&it->second)) p = static_cast<double>(*i);
    }
    const std::uint64_t n = calls_->fetch_add(1);
    if (static_cast<double>(hash_combine(o_.seed, n) % 1000000) < p * 1e6) {
      throw KernelError(ErrorCode::kToolFailed, "fail tool tripped on call " + std::to_string(n));
    }
    return "ok";
  }

 private:
  MockToolOptions o_;
  std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

class CounterTool final : public Tool {
 public:
  CounterTool(MockToolOptions o, std::shared_ptr<std::atomic<std::int64_t>> value)
      : o_(o), value_(std::move(value)) {}
  std::string run(const Params&) override {
    busy_for(o_, o_.cost_units);
    return std::to_string(value_->fetch_add(1) + 1);
  }

 private:
  MockToolOptions o_;
  std::shared_ptr<std::atomic<std::int64_t>> value_;
};

}  // namespace

ToolFactory mock_tool_factory(std::string_view class_name, const MockToolOptions& options) {
  if (class_name == "Echo") {
    return [options] { return std::make_unique<EchoTool>(options); };
  }
  if (class_name == "Delay") {
    return [options] { return std::make_unique<DelayTool>(options); };
  }
  if (class_name == "Fail") {
    auto calls = std::make_shared<std::atomic<std::uint64_t>>(0);
    return [options, calls] { return std::make_unique<FailTool>(options, calls); };
  }
  if (class_name == "Counter") {
    auto value = std::make_shared<std::atomic<std::int64_t>>(0);
    return [options, value] { return std::make_unique<CounterTool>(options, value); };
  }
  return {};
}

void ToolManager::register_tool(ToolRegistration reg) {
  validate_tool_schema(reg.schema);
  if (reg.max_parallel < 1) {
    throw KernelError(ErrorCode::kValidation, "max_parallel of " + reg.schema.name + " must be >= 1");
  }
  if (!reg.factory) {
    throw KernelError(ErrorCode::kValidation, "tool " + reg.schema.name + " has no constructor");
  }
  std::lock_guard lock(mu_);
  if (registry_.count(reg.schema.name)) {
    throw KernelError(ErrorCode::kDuplicate, "tool " + reg.schema.name + " already registered");
  }
  const std::string name = reg.schema.name;
  registry_.emplace(name, std::move(reg));
  running_[name] = 0;
  peak_[name] = 0;
}

bool ToolManager::has_tool(std::string_view name) const {
  std::lock_guard lock(mu_);
  return registry_.find(name) != registry_.end();
}

const ToolRegistration& ToolManager::lookup(std::string_view name) const {
  std::lock_guard lock(mu_);
  auto it = registry_.find(name);
  if (it == registry_.end()) {
    throw KernelError(ErrorCode::kUnknownTool, "unknown tool '" + std::string(name) + "'");
  }
  // Registrations are never removed, so the reference stays valid.
  return it->second;
}

std::vector<std::string> ToolManager::tool_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, reg] : registry_) out.push_back(name);
  return out;
}

std::unique_ptr<Tool> ToolManager::load_tool_instance(std::string_view name) const {
  return lookup(name).factory();
}

Params ToolManager::validate_params(const ToolSchema& schema, const Params& params) {
  Params out;
  for (const auto& [name, value] : params) {
    auto it = schema.params.find(name);
    if (it == schema.params.end()) {
      throw KernelError(ErrorCode::kValidation, "unknown parameter '" + name + "' for " + schema.name);
    }
    const ParamSpec& spec = it->second;
    auto type_error = [&] {
      return KernelError(ErrorCode::kValidation, "parameter '" + name + "' must be " +
                                                     std::string(to_string(spec.type)));
    };
    ParamValue normalized = value;
    switch (spec.type) {
      case ParamType::kString:
        if (!std::holds_alternative<std::string>(value)) throw type_error();
        break;
      case ParamType::kInteger:
        if (!std::holds_alternative<std::int64_t>(value)) throw type_error();
        break;
      case ParamType::kNumber:
        if (auto* i = std::get_if<std::int64_t>(&value)) {
          normalized = static_cast<double>(*i);
        } else if (!std::holds_alternative<double>(value)) {
          throw type_error();
        }
        break;
      case ParamType::kBoolean:
        if (!std::holds_alternative<bool>(value)) throw type_error();
        break;
    }
    if (spec.pattern) {
      const std::string text = param_to_string(normalized);
      if (!std::regex_match(text, std::regex(*spec.pattern))) {
        throw KernelError(ErrorCode::kValidation,
                          "parameter '" + name + "' does not match pattern " + *spec.pattern);
      }
    }
    out.emplace(name, std::move(normalized));
  }
  for (const auto& [name, spec] : schema.params) {
    if (spec.required && !out.count(name)) {
      throw KernelError(ErrorCode::kValidation, "missing required parameter '" + name + "'");
    }
  }
  return out;
}

bool ToolManager::under_limit_locked(const std::string& name) const {
  auto reg = registry_.find(name);
  if (reg == registry_.end()) return true;
  return running_.at(name) < reg->second.max_parallel;
}

bool ToolManager::try_reserve(std::string_view name) {
  std::lock_guard lock(mu_);
  const std::string key(name);
  if (!registry_.count(key)) return true;
  if (!under_limit_locked(key)) return false;
  const std::int64_t now = ++running_[key];
  auto& pk = peak_[key];
  pk = std::max(pk, now);
  return true;
}

void ToolManager::release(const std::string& name) {
  {
    std::lock_guard lock(mu_);
    auto it = running_.find(name);
    if (it == running_.end()) return;
    --it->second;
  }
  released_.notify_all();
}

Response ToolManager::execute(const ToolCall& call) {
  try {
    const ToolRegistration& reg = lookup(call.name);
    const Params params = validate_params(reg.schema, call.parameters);
    auto tool = reg.factory();
    return Response::text(tool->run(params));
  } catch (const KernelError& e) {
    return Response::failure("tool", e.code(), e.what());
  } catch (const std::exception& e) {
    return Response::failure("tool", ErrorCode::kToolFailed, e.what());
  }
}

Response ToolManager::run_reserved(const ToolCall& call) {
  Response r = execute(call);
  release(call.name);
  return r;
}

Response ToolManager::tool_run(const ToolCall& call) {
  {
    std::unique_lock lock(mu_);
    if (registry_.count(call.name)) {
      released_.wait(lock, [&] { return under_limit_locked(call.name); });
      const std::int64_t now = ++running_[call.name];
      auto& pk = peak_[call.name];
      pk = std::max(pk, now);
    }
  }
  return run_reserved(call);
}

std::optional<std::size_t> ToolManager::first_runnable(const std::vector<std::string>& names) const {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (under_limit_locked(names[i])) return i;
  }
  return std::nullopt;
}

std::int64_t ToolManager::running(std::string_view name) const {
  std::lock_guard lock(mu_);
  auto it = running_.find(name);
  return it == running_.end() ? 0 : it->second;
}

std::int64_t ToolManager::peak(std::string_view name) const {
  std::lock_guard lock(mu_);
  auto it = peak_.find(name);
  return it == peak_.end() ? 0 : it->second;
}

void ToolManager::reset_peaks() {
  std::lock_guard lock(mu_);
  for (auto& [name, v] : peak_) v = running_[name];
}

}  // namespace agentkern
