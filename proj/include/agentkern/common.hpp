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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agentkern {

/// Model time. One model unit is kTicksPerUnit ticks; every cost and every
/// timestamp is an integer tick count so schedules are exact and portable.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerUnit = 1000;

/// Rounds a (possibly fractional) unit count to the nearest tick.
Ticks units_to_ticks(double units);
double ticks_to_units(Ticks t);
/// Fixed three-decimal rendering of a tick count, e.g. 1234 -> "1.234".
std::string format_ticks(Ticks t);

enum class ErrorCode {
  kRejected,
  kTransition,
  kCapacityExceeded,
  kContext,
  kParse,
  kValidation,
  kNotFound,
  kCorruption,
  kIo,
  kUnknownTool,
  kToolFailed,
  kOversize,
  kConfig,
  kPermission,
  kDuplicate,
  kInternal,
};

std::string_view to_string(ErrorCode code);

class KernelError : public std::runtime_error {
 public:
  KernelError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Stable, platform-independent hashing used for every derived quantity that
// must be reproducible across runs (generation lengths, tokens, embeddings).
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

/// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::string to_lower_ascii(std::string_view s);
std::string trim_ascii(std::string_view s);

}  // namespace agentkern
