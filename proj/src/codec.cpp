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

#include "agentkern/codec.hpp"

#include <zlib.h>

#include <array>
#include <cstdint>
#include <limits>

#include "agentkern/common.hpp"

namespace agentkern {

std::string deflate_bytes(std::string_view raw, int level) {
  if (raw.size() > std::numeric_limits<uLong>::max()) {
    throw KernelError(ErrorCode::kIo, "payload too large to compress");
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string out(bound, '\0');
  const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                           reinterpret_cast<const Bytef*>(raw.data()),
                           static_cast<uLong>(raw.size()), level);
  if (rc != Z_OK) throw KernelError(ErrorCode::kIo, "deflate failed: " + std::to_string(rc));
  out.resize(bound);
  return out;
}

std::string inflate_bytes(std::string_view compressed) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw KernelError(ErrorCode::kInternal, "inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());

  std::string out;
  std::array<char, 16384> chunk{};
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) break;
    out.append(chunk.data(), chunk.size() - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      // Input exhausted before the end-of-stream marker.
      rc = Z_BUF_ERROR;
      break;
    }
  }
  const bool trailing = zs.avail_in != 0;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || trailing) {
    throw KernelError(ErrorCode::kCorruption,
                      "invalid or truncated deflate stream (zlib rc " + std::to_string(rc) + ")");
  }
  return out;
}

std::string DeflateCodec::encode(std::string_view text) const {
  std::string framed;
  framed.reserve(text.size() + 8);
  std::uint64_t n = text.size();
  for (int i = 0; i < 8; ++i) framed.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  framed.append(text);
  return deflate_bytes(framed, level_);
}

std::string DeflateCodec::decode(std::string_view bytes) const {
  std::string framed = inflate_bytes(bytes);
  if (framed.size() < 8) throw KernelError(ErrorCode::kCorruption, "payload frame too short");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) {
    n |= static_cast<std::uint64_t>(static_cast<unsigned char>(framed[i])) << (8 * i);
  }
  if (n != framed.size() - 8) {
    throw KernelError(ErrorCode::kCorruption, "payload length prefix does not match content");
  }
  return framed.substr(8);
}

const PayloadCodec& default_codec() {
  static const DeflateCodec codec;
  return codec;
}

}  // namespace agentkern
