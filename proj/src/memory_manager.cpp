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

#include "agentkern/memory_manager.hpp"

#include <cmath>

#include "agentkern/common.hpp"

namespace agentkern {

std::size_t MemoryConfig::limit_bytes() const {
  // The epsilon absorbs binary representation error, e.g. 0.8 * 1000.
  return static_cast<std::size_t>(
      std::floor(threshold * static_cast<double>(capacity_bytes) + 1e-9));
}

void MemoryConfig::validate() const {
  if (capacity_bytes == 0) {
    throw KernelError(ErrorCode::kConfig, "memory.capacity_bytes must be positive");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw KernelError(ErrorCode::kConfig, "memory.threshold must be in (0, 1]");
  }
  if (eviction_k == 0) throw KernelError(ErrorCode::kConfig, "memory.eviction_k must be >= 1");
}

MemoryManager::MemoryManager(MemoryConfig config, StorageManager& storage,
                             const PayloadCodec& codec)
    : config_(config), storage_(storage), codec_(codec) {
  config_.validate();
}

std::string MemoryManager::collection_name(std::int64_t aid) {
  return "agent_" + std::to_string(aid);
}

void MemoryManager::set_eviction_observer(std::function<void(const EvictionEvent&)> observer) {
  std::lock_guard lock(mu_);
  observer_ = std::move(observer);
}

MemoryManager::Block& MemoryManager::alloc_locked(std::int64_t aid) {
  auto it = blocks_.find(aid);
  if (it != blocks_.end()) return it->second;
  storage_.sto_create(collection_name(aid));
  return blocks_[aid];
}

void MemoryManager::mem_alloc(std::int64_t aid) {
  std::lock_guard lock(mu_);
  alloc_locked(aid);
}

void MemoryManager::touch(Block& block, std::int64_t rid) {
  Record& rec = block.records.at(rid);
  block.lru.splice(block.lru.end(), block.lru, rec.pos);
  rec.last_access = ++access_clock_;
}

void MemoryManager::mem_write(std::int64_t aid, std::int64_t rid, std::string_view s) {
  std::string bytes = codec_.encode(s);
  const std::size_t limit = config_.limit_bytes();
  if (bytes.size() > limit) {
    throw KernelError(ErrorCode::kOversize,
                      "record " + std::to_string(rid) + " compresses to " +
                          std::to_string(bytes.size()) + " bytes, block limit is " +
                          std::to_string(limit));
  }

  std::lock_guard lock(mu_);
  Block& block = alloc_locked(aid);
  if (auto it = block.records.find(rid); it != block.records.end()) {
    block.used_bytes -= it->second.bytes.size();
    block.used_bytes += bytes.size();
    it->second.bytes = std::move(bytes);
  } else {
    block.used_bytes += bytes.size();
    block.lru.push_back(rid);
    block.records.emplace(rid, Record{std::prev(block.lru.end()), std::move(bytes), 0});
  }
  touch(block, rid);

  while (block.used_bytes > limit) {
    EvictionEvent ev;
    ev.aid = aid;
    ev.trigger_rid = rid;
    ev.used_before = block.used_bytes;
    for (auto it = block.lru.begin();
         it != block.lru.end() && ev.evicted.size() < config_.eviction_k;) {
      const std::int64_t victim = *it;
      if (victim == rid) {
        ++it;
        continue;
      }
      Record& rec = block.records.at(victim);
      storage_.sto_write("", codec_.decode(rec.bytes), aid, victim);
      block.spilled.insert(victim);
      block.used_bytes -= rec.bytes.size();
      it = block.lru.erase(it);
      block.records.erase(victim);
      ev.evicted.push_back(victim);
    }
    ev.used_after = block.used_bytes;
    if (ev.evicted.empty()) {
      // Only the new record remains and the oversize check above rules that out.
      throw KernelError(ErrorCode::kInternal, "eviction made no progress");
    }
    if (observer_) observer_(ev);
  }
}

std::string MemoryManager::mem_read(std::int64_t aid, std::int64_t rid) {
  {
    std::lock_guard lock(mu_);
    auto bit = blocks_.find(aid);
    if (bit != blocks_.end()) {
      Block& block = bit->second;
      if (auto it = block.records.find(rid); it != block.records.end()) {
        touch(block, rid);
        return codec_.decode(it->second.bytes);
      }
    }
  }
  if (auto stored = storage_.sto_read("", aid, rid)) return *stored;
  throw KernelError(ErrorCode::kNotFound,
                    "no record " + std::to_string(rid) + " for agent " + std::to_string(aid));
}

void MemoryManager::mem_clear(std::int64_t aid) {
  std::lock_guard lock(mu_);
  auto it = blocks_.find(aid);
  if (it == blocks_.end()) return;
  for (std::int64_t rid : it->second.spilled) storage_.sto_clear("", aid, rid);
  storage_.sto_clear(collection_name(aid));
  blocks_.erase(it);
}

bool MemoryManager::has_block(std::int64_t aid) const {
  std::lock_guard lock(mu_);
  return blocks_.count(aid) != 0;
}

std::size_t MemoryManager::used_bytes(std::int64_t aid) const {
  std::lock_guard lock(mu_);
  auto it = blocks_.find(aid);
  return it == blocks_.end() ? 0 : it->second.used_bytes;
}

std::vector<std::int64_t> MemoryManager::resident_rids(std::int64_t aid) const {
  std::lock_guard lock(mu_);
  auto it = blocks_.find(aid);
  if (it == blocks_.end()) return {};
  return {it->second.lru.begin(), it->second.lru.end()};
}

}  // namespace agentkern
