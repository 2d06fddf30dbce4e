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

#ifndef MESHIDX_CORPUS_RECORD_HPP
#define MESHIDX_CORPUS_RECORD_HPP

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace meshidx::corpus {

/// Structurally invalid input (well-formed bytes, wrong content).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Section : int {
  kTitle = 0,
  kAbstract,
  kIntro,
  kMethods,
  kResults,
  kDiscuss,
  kFigCaptions,
  kTableCaptions,
};

inline constexpr int kSectionCount = 8;

/// JSON keys for the eight text sections, in canonical record order.
inline constexpr std::array<std::string_view, kSectionCount> kSectionKeys = {
    "TITLE",   "ABSTRACT", "INTRO",        "METHODS",
    "RESULTS", "DISCUSS",  "FIG_CAPTIONS", "TABLE_CAPTIONS",
};

/// The eight normalized text sections of one full-text article.
struct FullTextSections {
  std::string pmid;
  std::array<std::optional<std::string>, kSectionCount> sections;

  const std::optional<std::string>& section(Section s) const {
    return sections[static_cast<int>(s)];
  }
  std::optional<std::string>& section(Section s) {
    return sections[static_cast<int>(s)];
  }
  bool has(Section s) const { return section(s).has_value(); }

  bool operator==(const FullTextSections&) const = default;
};

enum class IndexingMode { kHuman, kCurated, kAuto };

std::string_view to_string(IndexingMode mode);

/// Citation metadata extracted from one MEDLINE baseline record.
struct CitationMetadata {
  std::string pmid;
  std::string language;
  IndexingMode indexing_mode = IndexingMode::kHuman;
  std::string journal;
  std::optional<int> year;
  std::optional<std::string> doi;
  std::vector<std::string> authors;           // "ForeName,LastName"
  std::map<std::string, std::string> mesh;    // descriptor UI -> name
  std::vector<std::string> chemicals;         // empty serializes as "None"
  std::vector<std::string> suppl_mesh;        // empty serializes as "None"

  bool operator==(const CitationMetadata&) const = default;
};

/// One joined document: full-text sections plus citation metadata sharing the
/// same PMID.
struct ArticleRecord {
  FullTextSections sections;
  CitationMetadata citation;

  const std::string& pmid() const { return citation.pmid; }
  bool operator==(const ArticleRecord&) const = default;
};

/// Throws SchemaError when the two halves disagree on the PMID or the PMID is
/// empty.
void validate_record(const ArticleRecord& record);

/// Serializes one record as a single-line JSON object with the fixed key
/// order PMID, TITLE, ABSTRACT, INTRO, METHODS, RESULTS, DISCUSS,
/// FIG_CAPTIONS, TABLE_CAPTIONS, JOURNAL, YEAR, DOI, AUTHORS, MeSH,
/// CHEMICALS, SUPPLMeSH. Absent sections, year and DOI serialize as the
/// string "None", as do empty chemical and supplementary-concept lists.
std::string emit_record(const ArticleRecord& record);

/// Inverse of emit_record; throws SchemaError on missing keys or bad types.
ArticleRecord parse_record(std::string_view json_line);

/// Serialization of the full-text half only (spill files, tests).
std::string emit_sections(const FullTextSections& sections);
FullTextSections parse_sections(std::string_view json_line);

}  // namespace meshidx::corpus

#endif  // MESHIDX_CORPUS_RECORD_HPP
