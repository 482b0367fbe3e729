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
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "agentkern/common.hpp"
#include "agentkern/context_manager.hpp"
#include "agentkern/types.hpp"

namespace agentkern {

enum class CoreKind { kSimulated, kHttp };

struct CoreConfig {
  CoreKind core_kind = CoreKind::kSimulated;
  std::int64_t slots = 1;
  double prefill_cost_per_token = 0.2;
  double decode_cost_per_token = 1.0;
  std::int64_t max_new_tokens = 256;
  std::int64_t beam_width = 1;
  std::uint64_t seed = 0;
  /// Fraction of the prefill cost a failed (capacity-exceeded) attempt burns.
  double failed_attempt_waste = 1.0;
  /// Percentage of tool-enabled generations the simulated core ends with a
  /// tool-call array.
  std::int64_t tool_call_percent = 100;

  void validate() const;
};

enum class FinishReason { kLength, kStop };

struct Generation {
  std::string text;
  std::int64_t token_count = 0;
  FinishReason finish_reason = FinishReason::kStop;
  std::optional<std::vector<ToolCall>> tool_calls;
};

struct LlmRequest {
  Prompt messages;
  std::vector<ToolSchema> tools;  // non-empty only for tool-use generations
  GenerationParams params;
};

/// Per-segment limits. decode_tokens caps emitted tokens; time caps the model
/// time spent, prefill included, so a segment can stop mid-prefill.
struct Budget {
  std::optional<std::int64_t> decode_tokens;
  std::optional<Ticks> time;

  bool unlimited() const { return !decode_tokens && !time; }
};

/// Result of one generation segment: either the finished generation or the
/// snapshot to resume from, plus the work done in this segment.
struct GenerateOutcome {
  std::variant<Generation, DecodeSnapshot> result;
  Ticks cost = 0;
  std::int64_t prefill_tokens = 0;
  std::int64_t decode_tokens = 0;

  bool suspended() const { return std::holds_alternative<DecodeSnapshot>(result); }
  const Generation& generation() const { return std::get<Generation>(result); }
  const DecodeSnapshot& snapshot() const { return std::get<DecodeSnapshot>(result); }
};

class LlmCore;

/// RAII hold on one of the core's generation slots.
class SlotLease {
 public:
  SlotLease() = default;
  explicit SlotLease(LlmCore* core) : core_(core) {}
  SlotLease(SlotLease&& o) noexcept : core_(std::exchange(o.core_, nullptr)) {}
  SlotLease& operator=(SlotLease&& o) noexcept;
  SlotLease(const SlotLease&) = delete;
  SlotLease& operator=(const SlotLease&) = delete;
  ~SlotLease() { release(); }

  bool held() const { return core_ != nullptr; }
  void release();

 private:
  LlmCore* core_ = nullptr;
};

/// Uniform interface over LLM instances. Callers must hold a slot while
/// generating.
class LlmCore {
 public:
  explicit LlmCore(std::int64_t slots);
  virtual ~LlmCore() = default;

  /// Blocks until a slot is free.
  SlotLease acquire_slot();
  /// Throws kCapacityExceeded when every slot is taken.
  SlotLease try_acquire_slot();
  std::int64_t slots() const { return slots_; }
  std::int64_t slots_in_use() const;

  virtual GenerateOutcome llm_generate(const LlmRequest& request,
                                       const DecodeSnapshot* resume_from, const Budget& budget,
                                       SnapshotMode mode, std::uint64_t cid) = 0;

  /// Identity of a request for snapshot validation.
  virtual std::uint64_t prompt_hash(const LlmRequest& request) const;
  virtual bool supports_suspension() const { return true; }
  /// Model-time cost of one decode token, the unit RR slices are measured in.
  virtual Ticks decode_tick_cost() const = 0;

 private:
  friend class SlotLease;
  void release_slot();

  const std::int64_t slots_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::int64_t in_use_ = 0;
};

/// Deterministic stand-in for a real model. Output length is
///   L = min_new + hash(seed, prompt) mod (max_new - min_new + 1)
/// with min_new defaulting to 1, tokens come from a beam search over integer
/// scores derived from (seed, prompt, step, previous token), and the cost of a
/// run is prefill_cost * P + decode_cost * L where P is the prompt's
/// whitespace word count.
class SimCore final : public LlmCore {
 public:
  explicit SimCore(CoreConfig config);

  GenerateOutcome llm_generate(const LlmRequest& request, const DecodeSnapshot* resume_from,
                               const Budget& budget, SnapshotMode mode,
                               std::uint64_t cid) override;
  Ticks decode_tick_cost() const override { return decode_ticks_; }
  Ticks prefill_tick_cost() const { return prefill_ticks_; }

  const CoreConfig& config() const { return config_; }
  /// Highest number of generations observed running at once.
  std::int64_t peak_concurrency() const { return peak_.load(); }

  std::int64_t prompt_token_count(const LlmRequest& request) const;
  std::int64_t target_length(const LlmRequest& request) const;
  /// Full uninterrupted cost of a request.
  Ticks full_cost(const LlmRequest& request) const;

  static const std::vector<std::string>& vocabulary();

 private:
  struct Resolved;
  Resolved resolve(const LlmRequest& request) const;
  void step_beam(const Resolved& r, BeamState& beam) const;
  std::string render_tool_calls(const Resolved& r, const LlmRequest& request) const;

  CoreConfig config_;
  Ticks prefill_ticks_;
  Ticks decode_ticks_;
  std::atomic<std::int64_t> active_{0};
  std::atomic<std::int64_t> peak_{0};
};

/// Appends a system message that frames input/output structure and lists the
/// available tools. Throws kValidation for malformed schemas.
Prompt tool_calling_input_format(const Prompt& prompt, const std::vector<ToolSchema>& tools);

/// Tool-call grammar: the first bracketed JSON array in the text, each element
/// {"name": "org/tool", "parameters": {scalar values}}. No bracket yields an
/// empty list; a bracket that does not parse under the grammar is kParse.
std::vector<ToolCall> parse_tool_calls(std::string_view text);
std::string render_tool_call_array(const std::vector<ToolCall>& calls);

bool is_valid_tool_name(std::string_view name);
void validate_tool_schema(const ToolSchema& schema);

/// Builds the request the core sees for a query: tool_use queries get the
/// tool framing and carry their tools.
LlmRequest build_llm_request(const Query& query);

struct AddressOutcome {
  std::optional<Response> response;  // set once the generation finished or failed
  std::optional<DecodeSnapshot> suspended;
  Ticks cost = 0;
  std::int64_t prefill_tokens = 0;
  std::int64_t decode_tokens = 0;
};

/// Runs one segment of an llm request end to end: formatting, generation,
/// tool-call parsing. Errors become a failed Response at stage "llm".
AddressOutcome address_request(LlmCore& core, const Query& query, const Budget& budget,
                               const DecodeSnapshot* resume_from, SnapshotMode mode,
                               std::uint64_t cid);

}  // namespace agentkern
