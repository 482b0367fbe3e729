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
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "agentkern/kernel.hpp"

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("agentkern-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline agentkern::Query chat(const std::string& text, std::int64_t tokens = 0) {
  agentkern::Query q;
  q.messages.push_back({"user", text});
  if (tokens > 0) {
    q.generation.max_new_tokens = tokens;
    q.generation.min_new_tokens = tokens;
  }
  return q;
}

/// Zero prefill so decode tokens are the only cost, one unit each.
inline agentkern::KernelConfig decode_only_config(const std::filesystem::path& root) {
  agentkern::KernelConfig c;
  c.core.prefill_cost_per_token = 0.0;
  c.core.decode_cost_per_token = 1.0;
  c.storage_root = root;
  return c;
}

inline agentkern::ToolConfig echo_tool(std::int64_t max_parallel = 1) {
  agentkern::ToolConfig t;
  t.schema.name = "demo/echo";
  t.schema.description = "echoes s";
  t.schema.params["s"] = agentkern::ParamSpec{agentkern::ParamType::kString, true, std::nullopt};
  t.max_parallel = max_parallel;
  return t;
}

/// Random UTF-8 text: ASCII, 2-, 3- and 4-byte code points.
inline std::string random_utf8(std::mt19937_64& rng, std::size_t max_bytes) {
  std::uniform_int_distribution<std::size_t> len_d(0, max_bytes);
  const std::size_t target = len_d(rng);
  std::string s;
  while (s.size() < target) {
    const auto kind = rng() % 4;
    std::uint32_t cp = 0;
    if (kind == 0) cp = 0x20 + rng() % 0x5f;
    if (kind == 1) cp = 0x80 + rng() % (0x800 - 0x80);
    if (kind == 2) {
      cp = 0x800 + rng() % (0x10000 - 0x800);
      if (cp >= 0xd800 && cp <= 0xdfff) cp = 0x4e00;
    }
    if (kind == 3) cp = 0x10000 + rng() % (0x110000 - 0x10000);
    std::string enc;
    if (cp < 0x80) {
      enc.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      enc.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      enc.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      enc.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      enc.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      enc.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      enc.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      enc.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      enc.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      enc.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
    if (s.size() + enc.size() > target) break;
    s += enc;
  }
  return s;
}

}  // namespace testutil
