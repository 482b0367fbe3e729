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

#include "agentkern/vector_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agentkern/common.hpp"

namespace agentkern {

Embedding hashed_embedding(std::string_view text, std::size_t dim) {
  Embedding v(dim, 0.0f);
  for (std::string_view tok : split_whitespace(text)) {
    v[fnv1a64(to_lower_ascii(tok)) % dim] += 1.0f;
  }
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  if (norm > 0.0) {
    const double inv = 1.0 / std::sqrt(norm);
    for (float& x : v) x = static_cast<float>(x * inv);
  }
  return v;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw KernelError(ErrorCode::kInternal, "embedding dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

VectorIndex::VectorIndex(Embedder embedder) : embedder_(std::move(embedder)) {}

void VectorIndex::create_collection(const std::string& name) { collections_[name]; }

bool VectorIndex::has_collection(const std::string& name) const {
  return collections_.count(name) != 0;
}

void VectorIndex::drop_collection(const std::string& name) { collections_.erase(name); }

void VectorIndex::add(const std::string& name, std::string text) {
  Embedding vec = embedder_(text);
  collections_[name].push_back(Entry{std::move(text), std::move(vec)});
}

std::size_t VectorIndex::size(const std::string& name) const {
  auto it = collections_.find(name);
  return it == collections_.end() ? 0 : it->second.size();
}

std::vector<ScoredText> VectorIndex::retrieve(const std::string& name, std::string_view query,
                                              std::size_t k) const {
  auto it = collections_.find(name);
  if (it == collections_.end()) {
    throw KernelError(ErrorCode::kNotFound, "no collection named '" + name + "'");
  }
  const Embedding q = embedder_(query);
  const auto& entries = it->second;
  std::vector<double> scores(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) scores[i] = cosine(q, entries[i].vector);

  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(k, order.size()));

  std::vector<ScoredText> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back({entries[i].text, scores[i]});
  return out;
}

}  // namespace agentkern
