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

#include "agentkern/llm_core.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <unordered_map>

#include "json.hpp"

namespace agentkern {

using nlohmann::json;

void CoreConfig::validate() const {
  if (slots < 1) throw KernelError(ErrorCode::kConfig, "core.sim.slots must be >= 1");
  if (prefill_cost_per_token < 0) {
    throw KernelError(ErrorCode::kConfig, "core.sim.prefill_cost_per_token must be >= 0");
  }
  if (!(decode_cost_per_token > 0)) {
    throw KernelError(ErrorCode::kConfig, "core.sim.decode_cost_per_token must be > 0");
  }
  if (max_new_tokens < 1) throw KernelError(ErrorCode::kConfig, "core.sim.max_new_tokens must be >= 1");
  if (beam_width < 1) throw KernelError(ErrorCode::kConfig, "core.sim.beam_width must be >= 1");
  if (failed_attempt_waste < 0 || failed_attempt_waste > 1) {
    throw KernelError(ErrorCode::kConfig, "core.failed_attempt_waste must be in [0, 1]");
  }
  if (tool_call_percent < 0 || tool_call_percent > 100) {
    throw KernelError(ErrorCode::kConfig, "core.sim.tool_call_percent must be in [0, 100]");
  }
}

// ---------------------------------------------------------------------------
// Slots

SlotLease& SlotLease::operator=(SlotLease&& o) noexcept {
  if (this != &o) {
    release();
    core_ = std::exchange(o.core_, nullptr);
  }
  return *this;
}

void SlotLease::release() {
  if (core_) std::exchange(core_, nullptr)->release_slot();
}

LlmCore::LlmCore(std::int64_t slots) : slots_(slots) {
  if (slots_ < 1) throw KernelError(ErrorCode::kConfig, "core needs at least one slot");
}

SlotLease LlmCore::acquire_slot() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_use_ < slots_; });
  ++in_use_;
  return SlotLease(this);
}

SlotLease LlmCore::try_acquire_slot() {
  std::lock_guard lock(mu_);
  if (in_use_ >= slots_) {
    throw KernelError(ErrorCode::kCapacityExceeded,
                      "all " + std::to_string(slots_) + " generation slots are in use");
  }
  ++in_use_;
  return SlotLease(this);
}

std::int64_t LlmCore::slots_in_use() const {
  std::lock_guard lock(mu_);
  return in_use_;
}

void LlmCore::release_slot() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  cv_.notify_one();
}

std::uint64_t LlmCore::prompt_hash(const LlmRequest& request) const {
  std::uint64_t h = fnv1a64("prompt");
  for (const Message& m : request.messages) {
    h = fnv1a64(m.role, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(m.content, h);
    h = fnv1a64("\x1e", h);
  }
  for (const ToolSchema& t : request.tools) {
    h = fnv1a64(t.name, h);
    h = fnv1a64("\x1d", h);
  }
  const auto& p = request.params;
  h = hash_combine(h, static_cast<std::uint64_t>(p.max_new_tokens.value_or(-1)));
  h = hash_combine(h, static_cast<std::uint64_t>(p.min_new_tokens.value_or(-1)));
  h = hash_combine(h, static_cast<std::uint64_t>(p.beam_width.value_or(-1)));
  return h;
}

// ---------------------------------------------------------------------------
// Simulated core

namespace {

constexpr std::uint32_t kCandidatesPerStep = 4;
constexpr std::uint32_t kCandidateStride = 17;  // coprime with the vocabulary size

bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

std::string join_tokens(const std::vector<std::uint32_t>& tokens) {
  const auto& vocab = SimCore::vocabulary();
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += vocab.at(tokens[i]);
  }
  return out;
}

std::vector<std::uint32_t> tokenize_known(std::string_view text) {
  static const std::unordered_map<std::string, std::uint32_t> ids = [] {
    std::unordered_map<std::string, std::uint32_t> m;
    const auto& vocab = SimCore::vocabulary();
    for (std::uint32_t i = 0; i < vocab.size(); ++i) m.emplace(vocab[i], i);
    return m;
  }();
  std::vector<std::uint32_t> out;
  for (std::string_view w : split_whitespace(text)) {
    auto it = ids.find(std::string(w));
    if (it == ids.end()) {
      throw KernelError(ErrorCode::kContext, "snapshot text has unknown token '" + std::string(w) + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

/// Aborts: exceeding the slot count inside the kernel is a scheduling bug.
void capacity_violation(std::int64_t active, std::int64_t slots) {
  std::fprintf(stderr, "SimCore: %lld concurrent generations exceed %lld slots\n",
               static_cast<long long>(active), static_cast<long long>(slots));
  std::abort();
}

}  // namespace

const std::vector<std::string>& SimCore::vocabulary() {
  static const std::vector<std::string> words = {
      "the",     "search",   "weather", "in",      "paris",   "flight",  "ua057",   "rain",
      "check",   "destination", "book", "hotel",   "city",    "today",   "tomorrow", "forecast",
      "plan",    "trip",     "route",   "airport", "gate",    "delay",   "arrive",  "depart",
      "reserve", "room",     "price",   "compare", "review",  "summary", "result",  "answer",
      "query",   "tool",     "call",    "memory",  "store",   "file",    "read",    "write",
      "agent",   "task",     "step",    "next",    "done",    "verify",  "report",  "data",
      "map",     "train",    "bus",     "ticket",  "cost",    "time",    "sunny",   "cloudy",
      "wind",    "north",    "south",   "east",    "west",    "update",  "confirm", "ok"};
  return words;
}

struct SimCore::Resolved {
  std::uint64_t key = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t length = 0;
  std::int64_t beam_width = 1;
  std::int64_t max_new = 0;
};

SimCore::SimCore(CoreConfig config)
    : LlmCore(config.slots),
      config_(config),
      prefill_ticks_(units_to_ticks(config.prefill_cost_per_token)),
      decode_ticks_(units_to_ticks(config.decode_cost_per_token)) {
  config_.validate();
  if (decode_ticks_ <= 0) {
    throw KernelError(ErrorCode::kConfig, "core.sim.decode_cost_per_token rounds to zero ticks");
  }
}

std::int64_t SimCore::prompt_token_count(const LlmRequest& request) const {
  std::int64_t n = 0;
  for (const Message& m : request.messages) {
    n += static_cast<std::int64_t>(split_whitespace(m.content).size());
  }
  return n;
}

SimCore::Resolved SimCore::resolve(const LlmRequest& request) const {
  Resolved r;
  r.key = hash_combine(config_.seed, prompt_hash(request));
  r.prompt_tokens = prompt_token_count(request);
  r.max_new = request.params.max_new_tokens.value_or(config_.max_new_tokens);
  const std::int64_t min_new = request.params.min_new_tokens.value_or(1);
  r.beam_width = request.params.beam_width.value_or(config_.beam_width);
  if (r.max_new < 1 || min_new < 1 || min_new > r.max_new) {
    throw KernelError(ErrorCode::kValidation, "need 1 <= min_new_tokens <= max_new_tokens");
  }
  if (r.beam_width < 1) throw KernelError(ErrorCode::kValidation, "beam_width must be >= 1");
  const auto span = static_cast<std::uint64_t>(r.max_new - min_new + 1);
  r.length = min_new + static_cast<std::int64_t>(splitmix64(r.key) % span);
  return r;
}

std::int64_t SimCore::target_length(const LlmRequest& request) const {
  return resolve(request).length;
}

Ticks SimCore::full_cost(const LlmRequest& request) const {
  const Resolved r = resolve(request);
  return prefill_ticks_ * r.prompt_tokens + decode_ticks_ * r.length;
}

void SimCore::step_beam(const Resolved& r, BeamState& beam) const {
  const auto vocab_size = static_cast<std::uint32_t>(vocabulary().size());
  std::vector<Hypothesis> next;
  next.reserve(beam.hypotheses.size() * kCandidatesPerStep);
  for (const Hypothesis& hyp : beam.hypotheses) {
    const std::uint64_t prev = hyp.tokens.empty() ? vocab_size : hyp.tokens.back();
    const std::uint64_t base =
        hash_combine(hash_combine(r.key, static_cast<std::uint64_t>(beam.step)), prev);
    for (std::uint32_t j = 0; j < kCandidatesPerStep; ++j) {
      Hypothesis h = hyp;
      h.tokens.push_back(static_cast<std::uint32_t>((base % vocab_size + j * kCandidateStride) %
                                                    vocab_size));
      h.score -= static_cast<std::int64_t>(hash_combine(base, j) % 1000);
      next.push_back(std::move(h));
    }
  }
  std::sort(next.begin(), next.end(), hypothesis_before);
  if (next.size() > static_cast<std::size_t>(r.beam_width)) next.resize(r.beam_width);
  beam.hypotheses = std::move(next);
  ++beam.step;
}

std::string SimCore::render_tool_calls(const Resolved& r, const LlmRequest& request) const {
  const std::uint64_t h = hash_combine(r.key, 0x7001);
  const ToolSchema& tool = request.tools[h % request.tools.size()];
  ToolCall call;
  call.name = tool.name;
  std::uint64_t salt = 0;
  for (const auto& [name, spec] : tool.params) {
    const std::uint64_t v = hash_combine(h, ++salt);
    if (!spec.required && (v & 1)) continue;
    switch (spec.type) {
      case ParamType::kString: call.parameters[name] = vocabulary()[v % vocabulary().size()]; break;
      case ParamType::kInteger: call.parameters[name] = static_cast<std::int64_t>(v % 100); break;
      case ParamType::kNumber: call.parameters[name] = static_cast<double>(v % 1000) / 10.0; break;
      case ParamType::kBoolean: call.parameters[name] = static_cast<bool>((v >> 1) & 1); break;
    }
  }
  return render_tool_call_array({call});
}

GenerateOutcome SimCore::llm_generate(const LlmRequest& request,
                                      const DecodeSnapshot* resume_from, const Budget& budget,
                                      SnapshotMode mode, std::uint64_t cid) {
  struct ActiveGuard {
    SimCore& core;
    explicit ActiveGuard(SimCore& c) : core(c) {
      const std::int64_t now = ++core.active_;
      std::int64_t peak = core.peak_.load();
      while (now > peak && !core.peak_.compare_exchange_weak(peak, now)) {
      }
      if (now > core.slots()) capacity_violation(now, core.slots());
    }
    ~ActiveGuard() { --core.active_; }
  } guard(*this);

  if (budget.decode_tokens && *budget.decode_tokens < 1) {
    throw KernelError(ErrorCode::kValidation, "decode token budget must be >= 1");
  }
  const Resolved r = resolve(request);
  const std::uint64_t ph = prompt_hash(request);

  std::int64_t prefill_progress = 0;
  std::int64_t tokens_done = 0;
  BeamState beam{0, {Hypothesis{}}};

  if (resume_from) {
    const DecodeSnapshot& s = *resume_from;
    if (s.prompt_hash != ph || s.target_tokens != r.length || s.prompt_tokens != r.prompt_tokens ||
        s.beam_width != r.beam_width) {
      throw KernelError(ErrorCode::kContext,
                        "snapshot " + std::to_string(s.cid) + " does not match this request");
    }
    if (s.tokens_done < 0 || s.tokens_done >= r.length || s.prefill_progress < 0 ||
        s.prefill_progress > r.prompt_tokens ||
        (s.tokens_done > 0 && s.prefill_progress != r.prompt_tokens)) {
      throw KernelError(ErrorCode::kContext, "snapshot progress out of range");
    }
    prefill_progress = s.prefill_progress;
    tokens_done = s.tokens_done;
    if (tokens_done > 0) {
      if (s.mode == SnapshotMode::kBeam) {
        beam = s.beam;
      } else {
        beam.hypotheses.clear();
        for (const TextHypothesis& t : s.text_beam) {
          beam.hypotheses.push_back(Hypothesis{tokenize_known(t.text), t.score});
        }
        beam.step = tokens_done;
      }
      if (beam.step != tokens_done || beam.hypotheses.empty()) {
        throw KernelError(ErrorCode::kContext, "snapshot beam is inconsistent");
      }
      for (const Hypothesis& h : beam.hypotheses) {
        if (static_cast<std::int64_t>(h.tokens.size()) != tokens_done) {
          throw KernelError(ErrorCode::kContext, "snapshot hypothesis length mismatch");
        }
      }
    }
  }

  GenerateOutcome out;
  Ticks spent = 0;
  auto progressed = [&] { return out.prefill_tokens + out.decode_tokens > 0; };

  if (prefill_progress < r.prompt_tokens) {
    std::int64_t chunk = r.prompt_tokens - prefill_progress;
    if (budget.time && prefill_ticks_ > 0) {
      chunk = std::min(chunk, (*budget.time - spent) / prefill_ticks_);
      if (chunk <= 0) chunk = 1;  // every segment makes progress
    }
    prefill_progress += chunk;
    spent += chunk * prefill_ticks_;
    out.prefill_tokens = chunk;
  }

  while (prefill_progress == r.prompt_tokens && tokens_done < r.length) {
    if (budget.decode_tokens && out.decode_tokens >= *budget.decode_tokens) break;
    if (budget.time && spent + decode_ticks_ > *budget.time && progressed()) break;
    step_beam(r, beam);
    ++tokens_done;
    ++out.decode_tokens;
    spent += decode_ticks_;
  }
  out.cost = spent;

  if (tokens_done == r.length) {
    Generation g;
    g.text = join_tokens(beam.hypotheses.front().tokens);
    g.token_count = tokens_done;
    g.finish_reason = tokens_done == r.max_new ? FinishReason::kLength : FinishReason::kStop;
    if (!request.tools.empty() &&
        static_cast<std::int64_t>(hash_combine(r.key, 0x5eed) % 100) < config_.tool_call_percent) {
      const std::string calls = render_tool_calls(r, request);
      g.text += " " + calls;
      g.tool_calls = parse_tool_calls(calls);
    }
    out.result = std::move(g);
    return out;
  }

  DecodeSnapshot snap;
  snap.cid = cid;
  snap.mode = mode;
  snap.prompt_hash = ph;
  snap.prompt_tokens = r.prompt_tokens;
  snap.prefill_progress = prefill_progress;
  snap.tokens_done = tokens_done;
  snap.target_tokens = r.length;
  snap.beam_width = r.beam_width;
  if (tokens_done > 0) {
    if (mode == SnapshotMode::kBeam) {
      snap.beam = std::move(beam);
    } else {
      snap.emitted = join_tokens(beam.hypotheses.front().tokens);
      for (const Hypothesis& h : beam.hypotheses) {
        snap.text_beam.push_back(TextHypothesis{join_tokens(h.tokens), h.score});
      }
    }
  }
  out.result = std::move(snap);
  return out;
}

// ---------------------------------------------------------------------------
// Tool-call formatting and parsing

bool is_valid_tool_name(std::string_view name) {
  static const std::regex re("^[a-z0-9_]+/[a-z0-9_]+$");
  return std::regex_match(name.begin(), name.end(), re);
}

void validate_tool_schema(const ToolSchema& schema) {
  if (!is_valid_tool_name(schema.name)) {
    throw KernelError(ErrorCode::kValidation,
                      "tool name '" + schema.name + "' must look like org/tool_name");
  }
  for (const auto& [name, spec] : schema.params) {
    if (name.empty()) {
      throw KernelError(ErrorCode::kValidation, "tool " + schema.name + " has an unnamed parameter");
    }
    if (spec.pattern) {
      try {
        std::regex re(*spec.pattern);
      } catch (const std::regex_error&) {
        throw KernelError(ErrorCode::kValidation,
                          "parameter '" + name + "' of " + schema.name + " has a bad pattern");
      }
    }
  }
}

Prompt tool_calling_input_format(const Prompt& prompt, const std::vector<ToolSchema>& tools) {
  std::string block =
      "<<structured-io>>\n"
      "Input: the conversation above, one message per turn.\n"
      "Output: plain text. To call tools, end the reply with one JSON array\n"
      "[{\"name\": \"<org/tool>\", \"parameters\": {\"<param>\": <value>}}].\n"
      "Tools:";
  if (tools.empty()) block += " none";
  for (const ToolSchema& t : tools) {
    validate_tool_schema(t);
    block += "\n- " + t.name;
    if (!t.description.empty()) block += ": " + t.description;
    block += " | parameters:";
    if (t.params.empty()) block += " none";
    bool first = true;
    for (const auto& [name, spec] : t.params) {
      block += first ? " " : ", ";
      first = false;
      block += name + " (" + std::string(to_string(spec.type)) +
               (spec.required ? ", required" : ", optional");
      if (spec.pattern) block += ", pattern " + *spec.pattern;
      block += ")";
    }
  }
  block += "\n<</structured-io>>";
  Prompt out = prompt;
  out.push_back(Message{"system", std::move(block)});
  return out;
}

std::string render_tool_call_array(const std::vector<ToolCall>& calls) {
  json arr = json::array();
  for (const ToolCall& c : calls) {
    json params = json::object();
    for (const auto& [k, v] : c.parameters) {
      std::visit([&](const auto& x) { params[k] = x; }, v);
    }
    arr.push_back(json{{"name", c.name}, {"parameters", params}});
  }
  return arr.dump();
}

namespace {

/// Index one past the bracket matching text[open], honouring JSON strings.
std::optional<std::size_t> match_bracket(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<ToolCall> parse_tool_calls(std::string_view text) {
  const std::size_t open = text.find('[');
  if (open == std::string_view::npos) return {};
  const auto close = match_bracket(text, open);
  if (!close) throw KernelError(ErrorCode::kParse, "unterminated '[' in tool-call region");

  json arr;
  try {
    arr = json::parse(text.substr(open, *close - open));
  } catch (const json::parse_error& e) {
    throw KernelError(ErrorCode::kParse, std::string("tool-call array is not valid JSON: ") + e.what());
  }
  if (!arr.is_array()) throw KernelError(ErrorCode::kParse, "tool-call region is not an array");

  std::vector<ToolCall> calls;
  for (const json& item : arr) {
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string()) {
      throw KernelError(ErrorCode::kParse, "tool call needs a string \"name\"");
    }
    ToolCall call;
    call.name = item["name"].get<std::string>();
    if (std::count(call.name.begin(), call.name.end(), '/') != 1) {
      throw KernelError(ErrorCode::kParse, "tool name '" + call.name + "' must contain one '/'");
    }
    if (item.contains("parameters")) {
      const json& params = item["parameters"];
      if (!params.is_object()) throw KernelError(ErrorCode::kParse, "\"parameters\" must be an object");
      for (const auto& [k, v] : params.items()) {
        if (v.is_string()) {
          call.parameters[k] = v.get<std::string>();
        } else if (v.is_boolean()) {
          call.parameters[k] = v.get<bool>();
        } else if (v.is_number_integer()) {
          call.parameters[k] = v.get<std::int64_t>();
        } else if (v.is_number_float()) {
          call.parameters[k] = v.get<double>();
        } else {
          throw KernelError(ErrorCode::kParse, "parameter '" + k + "' is not a scalar");
        }
      }
    }
    calls.push_back(std::move(call));
  }
  return calls;
}

// ---------------------------------------------------------------------------

LlmRequest build_llm_request(const Query& query) {
  LlmRequest req;
  req.params = query.generation;
  if (query.action_type == ActionType::kToolUse) {
    req.messages = tool_calling_input_format(query.messages, query.tools);
    req.tools = query.tools;
  } else {
    req.messages = query.messages;
  }
  return req;
}

AddressOutcome address_request(LlmCore& core, const Query& query, const Budget& budget,
                               const DecodeSnapshot* resume_from, SnapshotMode mode,
                               std::uint64_t cid) {
  AddressOutcome out;
  GenerateOutcome gen;
  try {
    gen = core.llm_generate(build_llm_request(query), resume_from, budget, mode, cid);
  } catch (const KernelError& e) {
    out.response = Response::failure("llm", e.code(), e.what());
    return out;
  }
  out.cost = gen.cost;
  out.prefill_tokens = gen.prefill_tokens;
  out.decode_tokens = gen.decode_tokens;
  if (gen.suspended()) {
    out.suspended = gen.snapshot();
    return out;
  }
  const Generation& g = gen.generation();
  Response resp = Response::text(g.text);
  if (query.action_type == ActionType::kToolUse) {
    try {
      resp.tool_calls = parse_tool_calls(g.text);
    } catch (const KernelError& e) {
      resp = Response::failure("llm", e.code(), e.what());
      resp.response_message = g.text;
    }
  }
  out.response = std::move(resp);
  return out;
}

}  // namespace agentkern
