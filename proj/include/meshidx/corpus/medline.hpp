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

#ifndef MESHIDX_CORPUS_MEDLINE_HPP
#define MESHIDX_CORPUS_MEDLINE_HPP

#include <filesystem>
#include <functional>
#include <string_view>

#include "meshidx/corpus/record.hpp"

namespace meshidx::corpus {

/// Parses one citation. Accepts a <PubmedArticle> (with optional <PubmedData>
/// used as a DOI fallback) or a bare <MedlineCitation> root.
///
/// The indexing mode comes from MedlineCitation's IndexingMethod attribute:
/// absent means indexed by a human, "Curated" and "Automated" map to curated
/// and auto.
CitationMetadata parse_medline_citation(std::string_view xml_text);

/// Streams every citation in a baseline file body. Returns the number of
/// citations emitted.
std::size_t stream_medline_citations(
    std::string_view xml_text, const std::function<void(CitationMetadata)>& sink);

/// Reads a baseline file (gzip accepted) and streams its citations.
std::size_t stream_medline_file(const std::filesystem::path& path,
                                const std::function<void(CitationMetadata)>& sink);

}  // namespace meshidx::corpus

#endif  // MESHIDX_CORPUS_MEDLINE_HPP
