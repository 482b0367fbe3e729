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

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace agentkern {

inline constexpr std::size_t kEmbeddingDim = 256;

using Embedding = std::vector<float>;
using Embedder = std::function<Embedding(std::string_view)>;

/// Hashed bag of lowercase whitespace tokens, L2-normalized. Text without
/// tokens maps to the zero vector.
Embedding hashed_embedding(std::string_view text, std::size_t dim = kEmbeddingDim);

double cosine(const Embedding& a, const Embedding& b);

struct ScoredText {
  std::string text;
  double score = 0.0;
};

/// Named collections of (text, embedding) pairs with cosine top-k retrieval.
/// Not internally synchronized.
class VectorIndex {
 public:
  explicit VectorIndex(Embedder embedder = [](std::string_view t) { return hashed_embedding(t); });

  void create_collection(const std::string& name);
  bool has_collection(const std::string& name) const;
  void drop_collection(const std::string& name);
  /// Appends to the collection, creating it when absent.
  void add(const std::string& name, std::string text);
  std::size_t size(const std::string& name) const;

  /// Top-k by cosine similarity, ties in insertion order. Throws kNotFound for
  /// a missing collection.
  std::vector<ScoredText> retrieve(const std::string& name, std::string_view query,
                                   std::size_t k) const;

 private:
  struct Entry {
    std::string text;
    Embedding vector;
  };
  Embedder embedder_;
  std::map<std::string, std::vector<Entry>> collections_;
};

}  // namespace agentkern
