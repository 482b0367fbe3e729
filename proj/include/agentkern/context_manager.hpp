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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agentkern/common.hpp"

namespace agentkern {

enum class SnapshotMode { kText, kBeam };

std::string_view to_string(SnapshotMode m);
SnapshotMode parse_snapshot_mode(std::string_view s);

struct Hypothesis {
  std::vector<std::uint32_t> tokens;
  std::int64_t score = 0;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// Live beam: hypotheses sorted by score (descending), each exactly step
/// tokens long.
struct BeamState {
  std::int64_t step = 0;
  std::vector<Hypothesis> hypotheses;

  friend bool operator==(const BeamState&, const BeamState&) = default;
};

struct TextHypothesis {
  std::string text;
  std::int64_t score = 0;

  friend bool operator==(const TextHypothesis&, const TextHypothesis&) = default;
};

/// Suspended generation state. In text mode only decoded strings survive
/// (what a text-only endpoint could hand back); in beam mode the token-level
/// search tree is kept. With tokens_done == 0 the prompt may be partially
/// prefilled.
struct DecodeSnapshot {
  std::uint64_t cid = 0;
  SnapshotMode mode = SnapshotMode::kText;
  std::uint64_t prompt_hash = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t prefill_progress = 0;
  std::int64_t tokens_done = 0;
  std::int64_t target_tokens = 0;
  std::int64_t beam_width = 1;

  std::string emitted;                    // text mode: best hypothesis so far
  std::vector<TextHypothesis> text_beam;  // text mode: every live hypothesis
  BeamState beam;                         // beam mode

  friend bool operator==(const DecodeSnapshot&, const DecodeSnapshot&) = default;
};

/// Lock-guarded snapshot store keyed by context id (the call id).
class ContextManager {
 public:
  explicit ContextManager(SnapshotMode mode = SnapshotMode::kText) : mode_(mode) {}

  SnapshotMode mode() const { return mode_; }

  void gen_snapshot(std::uint64_t cid, DecodeSnapshot data);
  /// Non-destructive read.
  std::optional<DecodeSnapshot> gen_restore(std::uint64_t cid) const;
  bool check_restore(std::uint64_t cid) const;
  void clear_restore(std::uint64_t cid);

  /// Stores the snapshot a suspended run produced.
  void suspend_generation(std::uint64_t cid, DecodeSnapshot snapshot);
  /// Snapshot to hand back to the core for cid, if any. Throws kContext when
  /// the stored snapshot was taken for a different prompt.
  std::optional<DecodeSnapshot> resume_generation(std::uint64_t cid,
                                                  std::uint64_t prompt_hash) const;

  std::size_t size() const;

 private:
  SnapshotMode mode_;
  mutable std::mutex mu_;
  std::map<std::uint64_t, DecodeSnapshot> contexts_;
};

}  // namespace agentkern
