/*
 * Copyright 2026 The meshidx Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "meshidx/gzip.hpp"

#include <zlib.h>

#include <stdexcept>

#include "meshidx/util.hpp"

namespace meshidx {

bool looks_gzip(std::string_view bytes) {
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
         static_cast<unsigned char>(bytes[1]) == 0x8b;
}

std::string gunzip(std::string_view bytes) {
  z_stream stream{};
  // 15 window bits + 16 selects gzip decoding.
  if (inflateInit2(&stream, 15 + 16) != Z_OK) {
    throw std::runtime_error("zlib: inflateInit2 failed");
  }
  std::string out;
  std::string chunk(1 << 16, '\0');
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  stream.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  while (stream.avail_in > 0 || rc == Z_OK) {
    stream.next_out = reinterpret_cast<Bytef*>(chunk.data());
    stream.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&stream, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&stream);
      throw std::runtime_error("zlib: corrupt gzip stream (code " +
                               std::to_string(rc) + ")");
    }
    out.append(chunk.data(), chunk.size() - stream.avail_out);
    if (rc == Z_STREAM_END) {
      if (stream.avail_in == 0) {
        break;
      }
      // Concatenated gzip members: reset and keep inflating.
      if (inflateReset(&stream) != Z_OK) {
        inflateEnd(&stream);
        throw std::runtime_error("zlib: inflateReset failed");
      }
      rc = Z_OK;
    }
  }
  inflateEnd(&stream);
  return out;
}

std::string read_file_maybe_gzip(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  if (looks_gzip(bytes)) {
    return gunzip(bytes);
  }
  return bytes;
}

}  // namespace meshidx
