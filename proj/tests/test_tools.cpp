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

#include <thread>

#include "doctest.h"

#include "agentkern/tool_manager.hpp"

using namespace agentkern;

namespace {

ToolRegistration reg(const std::string& name, const std::string& cls, std::int64_t max_parallel = 1,
                     double units = 0) {
  MockToolOptions o;
  o.cost_units = units;
  o.unit_duration = std::chrono::microseconds(1000);
  ToolRegistration r;
  r.schema.name = name;
  r.max_parallel = max_parallel;
  r.cost_model_units = units;
  r.factory = mock_tool_factory(cls, o);
  if (cls == "Echo") r.schema.params["s"] = ParamSpec{ParamType::kString, false, std::nullopt};
  if (cls == "Fail") r.schema.params["p"] = ParamSpec{ParamType::kNumber, false, std::nullopt};
  return r;
}

ToolSchema city_schema() {
  ToolSchema s;
  s.name = "travel/hotel_location_search";
  s.params["city"] = ParamSpec{ParamType::kString, true, std::nullopt};
  s.params["nights"] = ParamSpec{ParamType::kInteger, false, std::nullopt};
  s.params["budget"] = ParamSpec{ParamType::kNumber, false, std::nullopt};
  s.params["code"] = ParamSpec{ParamType::kString, false, std::string("[A-Z]{3}")};
  return s;
}

std::string validation_message(const Params& p) {
  try {
    ToolManager::validate_params(city_schema(), p);
  } catch (const KernelError& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("snake_to_camel") {
  CHECK(snake_to_camel("hotel_location_search") == "HotelLocationSearch");
  CHECK(snake_to_camel("arxiv") == "Arxiv");
  CHECK(snake_to_camel("currency_converter") == "CurrencyConverter");
}

TEST_CASE("registry") {
  ToolManager tm;
  tm.register_tool(reg("demo/echo", "Echo"));
  CHECK(tm.has_tool("demo/echo"));
  CHECK(tm.lookup("demo/echo").max_parallel == 1);
  CHECK_THROWS_AS(tm.register_tool(reg("demo/echo", "Echo")), KernelError);
  CHECK_THROWS_AS(tm.register_tool(reg("NoSlash", "Echo")), KernelError);
  CHECK_THROWS_AS(tm.register_tool(reg("demo/zero", "Echo", 0)), KernelError);
  CHECK_THROWS_AS(tm.register_tool(reg("demo/none", "Nope")), KernelError);
  CHECK(tm.tool_names() == std::vector<std::string>{"demo/echo"});
}

TEST_CASE("parameter validation") {
  CHECK(validation_message({{"city", std::string("Paris")}}).empty());
  CHECK(validation_message({}).find("city") != std::string::npos);
  CHECK(validation_message({{"city", std::int64_t{42}}}).find("city") != std::string::npos);
  CHECK(validation_message({{"city", std::string("x")}, {"zip", std::string("1")}})
            .find("zip") != std::string::npos);
  CHECK(validation_message({{"city", std::string("x")}, {"nights", 2.5}}).find("nights") !=
        std::string::npos);
  CHECK(validation_message({{"city", std::string("x")}, {"code", std::string("abc")}})
            .find("pattern") != std::string::npos);
  const Params ok = ToolManager::validate_params(
      city_schema(), {{"city", std::string("x")}, {"budget", std::int64_t{3}}, {"code", std::string("CDG")}});
  CHECK(std::get<double>(ok.at("budget")) == 3.0);
}

TEST_CASE("mock tools") {
  ToolManager tm;
  tm.register_tool(reg("demo/echo", "Echo"));
  tm.register_tool(reg("demo/counter", "Counter"));
  ToolRegistration fail = reg("demo/fail", "Fail");
  tm.register_tool(fail);
  const Response echo = tm.tool_run({"demo/echo", {{"s", std::string("hi")}}});
  CHECK(echo.response_message == "hi");
  CHECK(tm.tool_run({"demo/counter", {}}).response_message == "1");
  CHECK(tm.tool_run({"demo/counter", {}}).response_message == "2");
  const Response f = tm.tool_run({"demo/fail", {{"p", 1.0}}});
  REQUIRE(f.error.has_value());
  CHECK(f.error->code == ErrorCode::kToolFailed);
  CHECK(tm.tool_run({"demo/fail", {{"p", 0.0}}}).response_message == "ok");
  const Response unknown = tm.tool_run({"x/y", {}});
  REQUIRE(unknown.error.has_value());
  CHECK(unknown.error->code == ErrorCode::kUnknownTool);
  CHECK(tm.running("demo/fail") == 0);
}

TEST_CASE("two concurrent runs of a limit-1 tool never overlap") {
  ToolManager tm;
  tm.register_tool(reg("demo/delay", "Delay", 1, 20));
  std::vector<std::thread> ts;
  std::vector<Response> out(2);
  for (int i = 0; i < 2; ++i) ts.emplace_back([&, i] { out[i] = tm.tool_run({"demo/delay", {}}); });
  for (auto& t : ts) t.join();
  CHECK(out[0].ok());
  CHECK(out[1].ok());
  CHECK(tm.peak("demo/delay") == 1);
  CHECK(tm.running("demo/delay") == 0);
}

TEST_CASE("reservation and first_runnable") {
  ToolManager tm;
  tm.register_tool(reg("demo/x", "Echo", 1));
  tm.register_tool(reg("demo/y", "Echo", 2));
  CHECK(tm.try_reserve("demo/x"));
  CHECK_FALSE(tm.try_reserve("demo/x"));
  CHECK(tm.first_runnable({"demo/x", "demo/y"}) == std::optional<std::size_t>{1});
  CHECK(tm.try_reserve("demo/y"));
  CHECK(tm.try_reserve("demo/y"));
  CHECK_FALSE(tm.first_runnable({"demo/x", "demo/y"}).has_value());
  tm.run_reserved({"demo/x", {{"s", std::string("a")}}});
  CHECK(tm.first_runnable({"demo/x", "demo/y"}) == std::optional<std::size_t>{0});
  CHECK(tm.peak("demo/y") == 2);
}
