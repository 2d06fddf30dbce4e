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

#ifndef MESHIDX_CORPUS_BIOC_HPP
#define MESHIDX_CORPUS_BIOC_HPP

#include <filesystem>
#include <functional>
#include <string_view>

#include "meshidx/corpus/record.hpp"

namespace meshidx::corpus {

/// Parses a single BioC article (a <document>, or the first document of a
/// <collection>). Passage text is normalized and concatenated per section in
/// document order; section types without passages stay absent.
///
/// Section-type mapping: TITLE, ABSTRACT, INTRO, METHODS, RESULTS, DISCUSS,
/// FIG and TABLE feed the eight sections; any other type (REF, ACK, SUPPL,
/// ...) is dropped.
FullTextSections parse_bioc_article(std::string_view xml_text);

/// Streams every <document> in a BioC collection. Returns the number of
/// documents emitted.
std::size_t stream_bioc_documents(std::string_view xml_text,
                                  const std::function<void(FullTextSections)>& sink);

/// Reads a BioC file (gzip accepted) and streams its documents.
std::size_t stream_bioc_file(const std::filesystem::path& path,
                             const std::function<void(FullTextSections)>& sink);

}  // namespace meshidx::corpus

#endif  // MESHIDX_CORPUS_BIOC_HPP
