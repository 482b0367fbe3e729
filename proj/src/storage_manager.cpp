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

#include "agentkern/storage_manager.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "agentkern/common.hpp"

namespace agentkern {

namespace fs = std::filesystem;

std::string record_name(const std::string& aname, std::optional<std::int64_t> aid,
                        std::optional<std::int64_t> rid) {
  if (aid && rid) return std::to_string(*aid) + "_" + std::to_string(*rid);
  return aname;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw KernelError(ErrorCode::kIo, "cannot open " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, std::string_view bytes) {
  // Write-then-rename so a crash never leaves a half-written record.
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw KernelError(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw KernelError(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw KernelError(ErrorCode::kIo, "rename failed for " + p.string() + ": " + ec.message());
}

}  // namespace

StorageManager::StorageManager(fs::path root, const PayloadCodec& codec, Embedder embedder)
    : root_(std::move(root)), codec_(codec), index_(std::move(embedder)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw KernelError(ErrorCode::kIo, "cannot create storage root " + root_.string());
  rebuild_index();
}

void StorageManager::rebuild_index() {
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".dat") continue;
    const std::string name = entry.path().stem().string();
    index_.create_collection(name);
    const std::string bytes = read_file(entry.path());
    if (bytes.empty()) continue;
    try {
      index_.add(name, codec_.decode(bytes));
    } catch (const KernelError&) {
      // Corrupt records stay on disk and surface as kCorruption on read.
    }
  }
}

std::string StorageManager::checked_name(const std::string& aname, std::optional<std::int64_t> aid,
                                         std::optional<std::int64_t> rid) const {
  std::string name = record_name(aname, aid, rid);
  if (name.empty() || name == "." || name == ".." ||
      name.find_first_of(std::string_view("/\\\0", 3)) != std::string::npos) {
    throw KernelError(ErrorCode::kValidation, "invalid storage record name '" + name + "'");
  }
  return name;
}

fs::path StorageManager::record_path(const std::string& name) const {
  return root_ / (name + ".dat");
}

void StorageManager::sto_create(const std::string& aname, std::optional<std::int64_t> aid,
                                std::optional<std::int64_t> rid) {
  const std::string name = checked_name(aname, aid, rid);
  std::lock_guard lock(mu_);
  const fs::path p = record_path(name);
  if (!fs::exists(p)) write_file(p, "");
  index_.create_collection(name);
}

void StorageManager::sto_write(const std::string& aname, std::string_view s,
                               std::optional<std::int64_t> aid, std::optional<std::int64_t> rid) {
  const std::string name = checked_name(aname, aid, rid);
  const std::string bytes = codec_.encode(s);
  std::lock_guard lock(mu_);
  write_file(record_path(name), bytes);
  index_.add(name, std::string(s));
}

std::optional<std::string> StorageManager::sto_read(const std::string& aname,
                                                    std::optional<std::int64_t> aid,
                                                    std::optional<std::int64_t> rid) const {
  const std::string name = checked_name(aname, aid, rid);
  std::lock_guard lock(mu_);
  const fs::path p = record_path(name);
  if (!fs::exists(p)) return std::nullopt;
  const std::string bytes = read_file(p);
  if (bytes.empty()) return std::nullopt;
  try {
    return codec_.decode(bytes);
  } catch (const KernelError& e) {
    throw KernelError(ErrorCode::kCorruption, "record '" + name + "': " + e.what());
  }
}

std::vector<std::string> StorageManager::sto_retrieve(const std::string& aname,
                                                      std::string_view query,
                                                      std::optional<std::int64_t> aid,
                                                      std::optional<std::int64_t> rid,
                                                      std::size_t k) const {
  const std::string name = checked_name(aname, aid, rid);
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (auto& hit : index_.retrieve(name, query, k)) out.push_back(std::move(hit.text));
  return out;
}

void StorageManager::sto_clear(const std::string& aname, std::optional<std::int64_t> aid,
                               std::optional<std::int64_t> rid) {
  const std::string name = checked_name(aname, aid, rid);
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::remove(record_path(name), ec);
  if (ec) throw KernelError(ErrorCode::kIo, "cannot remove record '" + name + "': " + ec.message());
  index_.drop_collection(name);
}

bool StorageManager::has_collection(const std::string& name) const {
  std::lock_guard lock(mu_);
  return index_.has_collection(name);
}

std::size_t StorageManager::collection_size(const std::string& name) const {
  std::lock_guard lock(mu_);
  return index_.size(name);
}

}  // namespace agentkern
