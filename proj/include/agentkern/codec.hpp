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

#include <string>
#include <string_view>

namespace agentkern {

/// Turns a text payload into the bytes kept in memory blocks and record
/// files, and back. decode() throws KernelError(kCorruption) on bad input.
class PayloadCodec {
 public:
  virtual ~PayloadCodec() = default;
  virtual std::string encode(std::string_view text) const = 0;
  virtual std::string decode(std::string_view bytes) const = 0;
};

/// Wire format: a zlib-wrapped DEFLATE stream whose inflated content is an
/// 8-byte little-endian length followed by that many bytes of UTF-8.
class DeflateCodec final : public PayloadCodec {
 public:
  explicit DeflateCodec(int level = 6) : level_(level) {}

  std::string encode(std::string_view text) const override;
  std::string decode(std::string_view bytes) const override;

 private:
  int level_;
};

/// Raw DEFLATE helpers shared by the codec and tests.
std::string deflate_bytes(std::string_view raw, int level = 6);
std::string inflate_bytes(std::string_view compressed);

const PayloadCodec& default_codec();

}  // namespace agentkern
