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

#include "agentkern/common.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace agentkern {

Ticks units_to_ticks(double units) {
  return static_cast<Ticks>(std::llround(units * static_cast<double>(kTicksPerUnit)));
}

double ticks_to_units(Ticks t) {
  return static_cast<double>(t) / static_cast<double>(kTicksPerUnit);
}

std::string format_ticks(Ticks t) {
  const bool negative = t < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-t)
                                     : static_cast<std::uint64_t>(t);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%llu.%03llu", negative ? "-" : "",
                static_cast<unsigned long long>(mag / kTicksPerUnit),
                static_cast<unsigned long long>(mag % kTicksPerUnit));
  return buf;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRejected: return "rejected";
    case ErrorCode::kTransition: return "transition";
    case ErrorCode::kCapacityExceeded: return "capacity_exceeded";
    case ErrorCode::kContext: return "context";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kCorruption: return "corruption";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUnknownTool: return "unknown_tool";
    case ErrorCode::kToolFailed: return "tool_failed";
    case ErrorCode::kOversize: return "oversize";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kPermission: return "permission";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim_ascii(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace agentkern
