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

#include "agentkern/types.hpp"

#include <cstdio>

namespace agentkern {

std::string_view to_string(ActionType a) {
  switch (a) {
    case ActionType::kChat: return "chat";
    case ActionType::kToolUse: return "tool_use";
    case ActionType::kFileOperation: return "file_operation";
  }
  return "chat";
}

ActionType normalize_action_type(std::string_view s) {
  if (s == "chat") return ActionType::kChat;
  if (s == "tool_use" || s == "call_tool") return ActionType::kToolUse;
  if (s == "file_operation" || s == "operate_file") return ActionType::kFileOperation;
  throw KernelError(ErrorCode::kValidation,
                    "unknown action_type '" + std::string(s) + "'");
}

std::string param_to_string(const ParamValue& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", d);
      return buf;
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

std::string_view to_string(ParamType t) {
  switch (t) {
    case ParamType::kString: return "string";
    case ParamType::kInteger: return "integer";
    case ParamType::kNumber: return "number";
    case ParamType::kBoolean: return "boolean";
  }
  return "string";
}

ParamType parse_param_type(std::string_view s) {
  if (s == "string") return ParamType::kString;
  if (s == "integer") return ParamType::kInteger;
  if (s == "number") return ParamType::kNumber;
  if (s == "boolean") return ParamType::kBoolean;
  throw KernelError(ErrorCode::kValidation, "unknown parameter type '" + std::string(s) + "'");
}

Response Response::text(std::string s) {
  Response r;
  r.response_message = std::move(s);
  return r;
}

Response Response::failure(std::string stage, ErrorCode code, std::string message) {
  Response r;
  r.status = ResponseStatus::kFailed;
  r.error = ErrorInfo{std::move(stage), code, std::move(message)};
  return r;
}

void validate_query(const Query& q) {
  if (q.messages.empty()) {
    throw KernelError(ErrorCode::kValidation, "query.messages must be non-empty");
  }
  if (q.action_type == ActionType::kToolUse && q.tools.empty()) {
    throw KernelError(ErrorCode::kValidation, "tool_use query requires at least one tool");
  }
  if (q.message_return_type != "text" && q.message_return_type != "json") {
    throw KernelError(ErrorCode::kValidation,
                      "unsupported message_return_type '" + q.message_return_type + "'");
  }
}

}  // namespace agentkern
