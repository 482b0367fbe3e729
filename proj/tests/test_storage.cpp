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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"

#include "agentkern/storage_manager.hpp"
#include "test_util.hpp"

using namespace agentkern;
using testutil::TempDir;

namespace {

/// Cosine over token sets, ignoring hash buckets.
double set_cosine(const std::string& a, const std::string& b) {
  auto toks = [](const std::string& s) {
    std::istringstream in(s);
    std::set<std::string> out;
    for (std::string w; in >> w;) out.insert(w);
    return out;
  };
  const auto ta = toks(a), tb = toks(b);
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  return static_cast<double>(shared) / std::sqrt(static_cast<double>(ta.size() * tb.size()));
}

}  // namespace

TEST_CASE("record naming") {
  TempDir dir;
  StorageManager sm(dir.path());
  sm.sto_create("travel_agent");
  sm.sto_create("travel_agent");
  sm.sto_create("", 3, 7);
  CHECK(std::filesystem::exists(dir.path() / "travel_agent.dat"));
  CHECK(std::filesystem::exists(dir.path() / "3_7.dat"));
  CHECK(record_name("x", 3, 7) == "3_7");
  CHECK(record_name("x", std::nullopt, std::nullopt) == "x");
  CHECK(sm.has_collection("travel_agent"));
  CHECK(sm.has_collection("3_7"));
  std::size_t files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir.path())) files += e.is_regular_file();
  CHECK(files == 2);
  CHECK_THROWS_AS(sm.sto_create("../escape"), KernelError);
  CHECK_NOTHROW(sm.sto_create("agent0"));
}

TEST_CASE("write replaces and indexes") {
  TempDir dir;
  StorageManager sm(dir.path());
  sm.sto_write("notes", "first");
  CHECK(sm.collection_size("notes") == 1);
  sm.sto_write("notes", "second");
  CHECK(sm.collection_size("notes") == 2);
  CHECK(sm.sto_read("notes") == "second");
  CHECK_FALSE(sm.sto_read("absent").has_value());
}

TEST_CASE("truncated record is a corruption error, not absence") {
  TempDir dir;
  StorageManager sm(dir.path());
  sm.sto_write("doc", std::string(300, 'q') + " tail");
  const auto path = sm.record_path("doc");
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size / 2);
  try {
    sm.sto_read("doc");
    FAIL("expected corruption");
  } catch (const KernelError& e) {
    CHECK(e.code() == ErrorCode::kCorruption);
  }
}

TEST_CASE("retrieval ranks by cosine") {
  TempDir dir;
  StorageManager sm(dir.path());
  const std::vector<std::string> texts{"book a flight", "reserve hotel", "pay invoice"};
  for (const auto& t : texts) sm.sto_write("trip", t);
  const auto hits = sm.sto_retrieve("trip", "flight booking");
  REQUIRE(hits.size() == 3);
  CHECK(hits[0] == "book a flight");
  CHECK(set_cosine("flight booking", "book a flight") == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(set_cosine("flight booking", "reserve hotel") == 0.0);
  CHECK(cosine(hashed_embedding("flight booking"), hashed_embedding("book a flight")) ==
        doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(sm.sto_retrieve("trip", "pay invoice", std::nullopt, std::nullopt, 1) == std::vector<std::string>{"pay invoice"});
  CHECK(sm.sto_retrieve("trip", "hotel", std::nullopt, std::nullopt, 10).size() == 3);
  CHECK_THROWS_AS(sm.sto_retrieve("nope", "q"), KernelError);
}

TEST_CASE("embedding is deterministic and normalized") {
  const auto a = hashed_embedding("The Quick brown fox");
  const auto b = hashed_embedding("the quick BROWN fox");
  CHECK(a == b);
  CHECK(a.size() == kEmbeddingDim);
  double n = 0;
  for (float x : a) n += static_cast<double>(x) * x;
  CHECK(n == doctest::Approx(1.0));
}

TEST_CASE("clear is idempotent and scoped") {
  TempDir dir;
  StorageManager sm(dir.path());
  sm.sto_write("a", "one");
  sm.sto_write("b", "two");
  sm.sto_clear("a");
  sm.sto_clear("a");
  CHECK_FALSE(sm.sto_read("a").has_value());
  CHECK_FALSE(sm.has_collection("a"));
  CHECK(sm.sto_read("b") == "two");
  CHECK(sm.has_collection("b"));
}

TEST_CASE("durable across reopen with index rebuilt") {
  TempDir dir;
  const std::string text = "caf\xc3\xa9 \xe2\x9c\x93 r\xc3\xa9sum\xc3\xa9";
  {
    StorageManager sm(dir.path());
    sm.sto_write("", text, 2, 9);
    sm.sto_write("empty", "");
  }
  StorageManager again(dir.path());
  CHECK(again.sto_read("", 2, 9) == text);
  CHECK(again.sto_read("empty") == "");
  CHECK(again.sto_retrieve("", text, 2, 9, 1) == std::vector<std::string>{text});
}

TEST_CASE("deflate codec round trips") {
  const DeflateCodec codec;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::string s = testutil::random_utf8(rng, 2000);
    CHECK(codec.decode(codec.encode(s)) == s);
  }
  CHECK(codec.decode(codec.encode("")) == "");
  CHECK_THROWS_AS(codec.decode("not deflate"), KernelError);
}
