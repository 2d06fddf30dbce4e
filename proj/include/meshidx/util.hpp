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

#ifndef MESHIDX_UTIL_HPP
#define MESHIDX_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace meshidx {

/// FNV-1a over a byte sequence. Used for config hashes and input digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Collapses runs of whitespace to a single space, strips other control
/// characters, and trims. UTF-8 bytes >= 0x80 pass through untouched.
std::string normalize_text(std::string_view text);

/// Lowercases ASCII letters and splits on whitespace.
std::vector<std::string> tokenize(std::string_view text);

/// Numeric-order comparison for digit strings (PMIDs have no leading zeros,
/// so length-then-lex equals numeric order without overflow).
bool pmid_less(std::string_view a, std::string_view b);

/// Maps a raw 64-bit draw to [0, 1) with 53 bits of precision. Used instead
/// of std::uniform_real_distribution so seeded runs are library-independent.
double uniform01(std::mt19937_64& rng);

/// Fisher-Yates with an explicit index draw; stable across standard libraries.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

/// splitmix64 stream; cheap keyed RNG for dropout masks.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double next_double01();
};

/// Derives an independent stream seed from a master seed and stream ids.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace meshidx

#endif  // MESHIDX_UTIL_HPP
