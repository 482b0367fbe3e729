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
#include <string>

#include "agentkern/llm_core.hpp"

namespace agentkern {

struct HttpCoreConfig {
  std::string url = "http://127.0.0.1:8000";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key;
  std::int64_t max_new_tokens = 256;
  std::chrono::milliseconds timeout{60000};
};

/// Chat-completions client. Generations are not preemptible and their cost is
/// the measured wall time (one model unit per second).
class HttpCore final : public LlmCore {
 public:
  explicit HttpCore(HttpCoreConfig config, std::int64_t slots = 1);

  GenerateOutcome llm_generate(const LlmRequest& request, const DecodeSnapshot* resume_from,
                               const Budget& budget, SnapshotMode mode,
                               std::uint64_t cid) override;
  bool supports_suspension() const override { return false; }
  Ticks decode_tick_cost() const override { return kTicksPerUnit; }

  const HttpCoreConfig& config() const { return config_; }

 private:
  HttpCoreConfig config_;
};

}  // namespace agentkern
