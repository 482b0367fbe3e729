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
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agentkern/codec.hpp"
#include "agentkern/vector_index.hpp"

namespace agentkern {

/// "{aid}_{rid}" when both ids are present, otherwise the agent name.
std::string record_name(const std::string& aname, std::optional<std::int64_t> aid,
                        std::optional<std::int64_t> rid);

/// One file per record under root ("<name>.dat", payload encoded by the
/// codec) plus a per-record vector collection. The index is rebuilt from the
/// files when the manager is constructed.
class StorageManager {
 public:
  explicit StorageManager(std::filesystem::path root,
                          const PayloadCodec& codec = default_codec(),
                          Embedder embedder = [](std::string_view t) { return hashed_embedding(t); });

  void sto_create(const std::string& aname, std::optional<std::int64_t> aid = std::nullopt,
                  std::optional<std::int64_t> rid = std::nullopt);

  /// Replaces the record file content and appends the text to the collection.
  void sto_write(const std::string& aname, std::string_view s,
                 std::optional<std::int64_t> aid = std::nullopt,
                 std::optional<std::int64_t> rid = std::nullopt);

  /// Absent when no file exists or the file is empty; kCorruption when the
  /// file cannot be decoded.
  std::optional<std::string> sto_read(const std::string& aname,
                                      std::optional<std::int64_t> aid = std::nullopt,
                                      std::optional<std::int64_t> rid = std::nullopt) const;

  std::vector<std::string> sto_retrieve(const std::string& aname, std::string_view query,
                                        std::optional<std::int64_t> aid = std::nullopt,
                                        std::optional<std::int64_t> rid = std::nullopt,
                                        std::size_t k = 3) const;

  void sto_clear(const std::string& aname, std::optional<std::int64_t> aid = std::nullopt,
                 std::optional<std::int64_t> rid = std::nullopt);

  bool has_collection(const std::string& name) const;
  std::size_t collection_size(const std::string& name) const;
  std::filesystem::path record_path(const std::string& name) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::string checked_name(const std::string& aname, std::optional<std::int64_t> aid,
                           std::optional<std::int64_t> rid) const;
  void rebuild_index();

  std::filesystem::path root_;
  const PayloadCodec& codec_;
  mutable std::mutex mu_;
  VectorIndex index_;
};

}  // namespace agentkern
