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
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "agentkern/codec.hpp"
#include "agentkern/storage_manager.hpp"

namespace agentkern {

struct MemoryConfig {
  std::size_t capacity_bytes = 65536;
  double threshold = 0.8;  // in (0, 1]
  std::size_t eviction_k = 2;

  /// floor(threshold * capacity_bytes); the bound used_bytes must respect.
  std::size_t limit_bytes() const;
  void validate() const;
};

/// One round of K-LRU eviction triggered by a write.
struct EvictionEvent {
  std::int64_t aid = 0;
  std::int64_t trigger_rid = 0;
  std::vector<std::int64_t> evicted;  // least recent first
  std::size_t used_before = 0;
  std::size_t used_after = 0;
};

/// Per-agent byte-bounded blocks of compressed records. Writes that push a
/// block past threshold * capacity evict the K least recently accessed
/// records (never the one just written) to the storage manager, repeating
/// until the block is back under the limit.
class MemoryManager {
 public:
  MemoryManager(MemoryConfig config, StorageManager& storage,
                const PayloadCodec& codec = default_codec());

  void mem_alloc(std::int64_t aid);
  void mem_write(std::int64_t aid, std::int64_t rid, std::string_view s);
  /// Resident records are refreshed to most-recent; evicted ones are read
  /// through from storage without re-admission. kNotFound when in neither.
  std::string mem_read(std::int64_t aid, std::int64_t rid);
  void mem_clear(std::int64_t aid);

  bool has_block(std::int64_t aid) const;
  std::size_t used_bytes(std::int64_t aid) const;
  /// Resident rids, least recently accessed first.
  std::vector<std::int64_t> resident_rids(std::int64_t aid) const;
  const MemoryConfig& config() const { return config_; }

  void set_eviction_observer(std::function<void(const EvictionEvent&)> observer);

  static std::string collection_name(std::int64_t aid);

 private:
  struct Record {
    std::list<std::int64_t>::iterator pos;
    std::string bytes;
    std::uint64_t last_access = 0;
  };
  struct Block {
    std::list<std::int64_t> lru;  // front = least recent
    std::unordered_map<std::int64_t, Record> records;
    std::set<std::int64_t> spilled;  // rids written to storage at least once
    std::size_t used_bytes = 0;
  };

  Block& alloc_locked(std::int64_t aid);
  void touch(Block& block, std::int64_t rid);

  MemoryConfig config_;
  StorageManager& storage_;
  const PayloadCodec& codec_;
  mutable std::mutex mu_;
  std::map<std::int64_t, Block> blocks_;
  std::uint64_t access_clock_ = 0;
  std::function<void(const EvictionEvent&)> observer_;
};

}  // namespace agentkern
