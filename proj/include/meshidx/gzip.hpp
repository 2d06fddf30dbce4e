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

#ifndef MESHIDX_GZIP_HPP
#define MESHIDX_GZIP_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace meshidx {

bool looks_gzip(std::string_view bytes);

/// Inflates a gzip stream (multi-member streams supported).
std::string gunzip(std::string_view bytes);

/// Reads a file, transparently inflating it when gzip-compressed.
std::string read_file_maybe_gzip(const std::filesystem::path& path);

}  // namespace meshidx

#endif  // MESHIDX_GZIP_HPP
