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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agentkern/common.hpp"

namespace agentkern {

struct Message {
  std::string role;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

using Prompt = std::vector<Message>;

enum class ActionType { kChat, kToolUse, kFileOperation };

std::string_view to_string(ActionType a);

/// Accepts both spellings in circulation: "tool_use"/"call_tool" and
/// "file_operation"/"operate_file". Throws kValidation on anything else.
ActionType normalize_action_type(std::string_view s);

// Tool parameters are flat maps of scalars.
using ParamValue = std::variant<std::string, std::int64_t, double, bool>;
using Params = std::map<std::string, ParamValue>;

std::string param_to_string(const ParamValue& v);

enum class ParamType { kString, kInteger, kNumber, kBoolean };

std::string_view to_string(ParamType t);
ParamType parse_param_type(std::string_view s);

struct ParamSpec {
  ParamType type = ParamType::kString;
  bool required = false;
  std::optional<std::string> pattern;  // ECMAScript regex, full match
};

struct ToolSchema {
  std::string name;  // "org/tool_name"
  std::string description;
  std::map<std::string, ParamSpec> params;
};

struct ToolCall {
  std::string name;
  Params parameters;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct ErrorInfo {
  std::string stage;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

enum class ResponseStatus { kOk, kFailed };

struct Response {
  std::optional<std::string> response_message;
  std::optional<std::vector<ToolCall>> tool_calls;
  ResponseStatus status = ResponseStatus::kOk;
  std::optional<ErrorInfo> error;

  bool ok() const { return status == ResponseStatus::kOk; }

  static Response text(std::string s);
  static Response failure(std::string stage, ErrorCode code, std::string message);
};

/// Per-request overrides of the core's generation defaults.
struct GenerationParams {
  std::optional<std::int64_t> max_new_tokens;
  std::optional<std::int64_t> min_new_tokens;
  std::optional<std::int64_t> beam_width;
};

struct Query {
  std::vector<Message> messages;
  std::vector<ToolSchema> tools;
  ActionType action_type = ActionType::kChat;
  std::string message_return_type = "text";
  GenerationParams generation;
};

/// Throws kValidation when the envelope invariants do not hold.
void validate_query(const Query& q);

struct MemoryRequest {
  enum class Op { kAlloc, kRead, kWrite, kClear };
  Op op = Op::kRead;
  std::int64_t aid = 0;
  std::int64_t rid = 0;
  std::string payload;
};

struct StorageRequest {
  enum class Op { kCreate, kRead, kWrite, kRetrieve, kClear };
  Op op = Op::kRead;
  std::string aname;
  std::optional<std::int64_t> aid;
  std::optional<std::int64_t> rid;
  std::string payload;  // text for kWrite, query for kRetrieve
  std::int64_t k = 3;
};

struct AccessRequest {
  enum class Op { kCheckAccess, kAddPrivilege, kAskPermission };
  Op op = Op::kCheckAccess;
  std::int64_t sid = 0;
  std::int64_t tid = 0;
  std::string operation;
};

}  // namespace agentkern
