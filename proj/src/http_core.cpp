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

#include "agentkern/http_core.hpp"

#include "httplib.h"
#include "json.hpp"

namespace agentkern {

using nlohmann::json;

HttpCore::HttpCore(HttpCoreConfig config, std::int64_t slots)
    : LlmCore(slots), config_(std::move(config)) {
  if (config_.url.empty()) throw KernelError(ErrorCode::kConfig, "core.http.url must be set");
}

GenerateOutcome HttpCore::llm_generate(const LlmRequest& request,
                                       const DecodeSnapshot* resume_from, const Budget& /*budget*/,
                                       SnapshotMode /*mode*/, std::uint64_t /*cid*/) {
  if (resume_from) {
    throw KernelError(ErrorCode::kContext, "the http core cannot resume suspended generations");
  }
  json body;
  body["model"] = config_.model;
  body["max_tokens"] = request.params.max_new_tokens.value_or(config_.max_new_tokens);
  body["messages"] = json::array();
  for (const Message& m : request.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }

  httplib::Client client(config_.url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  client.set_read_timeout(secs.count(), 0);
  client.set_connection_timeout(secs.count(), 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const auto t0 = std::chrono::steady_clock::now();
  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  if (!res) {
    throw KernelError(ErrorCode::kIo, "http core request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw KernelError(ErrorCode::kIo, "http core returned status " + std::to_string(res->status));
  }

  std::string content;
  try {
    const json reply = json::parse(res->body);
    content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw KernelError(ErrorCode::kParse, std::string("malformed chat-completions reply: ") + e.what());
  }

  GenerateOutcome out;
  Generation g;
  g.token_count = static_cast<std::int64_t>(split_whitespace(content).size());
  g.text = std::move(content);
  out.decode_tokens = g.token_count;
  out.cost = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() *
             kTicksPerUnit / 1000;
  out.result = std::move(g);
  return out;
}

}  // namespace agentkern
