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

#ifndef MESHIDX_CORPUS_PIPELINE_HPP
#define MESHIDX_CORPUS_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshidx/corpus/record.hpp"

namespace meshidx::corpus {

/// True iff the citation is written in English and was indexed by a human.
bool filter_citation(const CitationMetadata& citation);

/// Pipeline-level gate: filter_citation plus a publication year, which the
/// year-stratified split downstream requires.
bool passes_ingest_filters(const CitationMetadata& citation);

/// Joins the two sides on their PMID key intersection. Output is sorted by
/// ascending numeric PMID.
std::vector<ArticleRecord> join_records(
    const std::map<std::string, FullTextSections>& sections,
    const std::map<std::string, CitationMetadata>& citations);

/// Per-section document counts and mean whitespace-token lengths.
struct SectionStats {
  std::array<std::int64_t, kSectionCount> articles{};
  std::array<double, kSectionCount> average_length{};
  std::int64_t total_records = 0;

  std::string to_json() const;
};

/// Incremental accumulator behind corpus_stats; usable while streaming.
class StatsAccumulator {
 public:
  void add(const ArticleRecord& record);
  SectionStats finish() const;

 private:
  std::array<std::int64_t, kSectionCount> counts_{};
  std::array<std::int64_t, kSectionCount> token_totals_{};
  std::int64_t records_ = 0;
};

SectionStats corpus_stats(std::span<const ArticleRecord> records);

/// Records that have all of title, abstract, intro, methods, results and
/// discussion.
std::vector<ArticleRecord> select_complete(std::span<const ArticleRecord> records);
bool is_complete(const ArticleRecord& record);

struct SplitSpec {
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless ratios are non-negative and sum to 1
  /// within 1e-9.
  void validate() const;
};

struct SplitResult {
  std::vector<ArticleRecord> train;
  std::vector<ArticleRecord> validation;
  std::vector<ArticleRecord> test;
};

/// Year-stratified split: within each publication year the partition sizes
/// follow the ratios under largest-remainder rounding, with a seeded shuffle
/// deciding membership. Every record must carry a year.
SplitResult stratified_split(std::span<const ArticleRecord> records,
                             const SplitSpec& spec);

/// Largest-remainder apportionment of n items to the given ratios; ties on
/// the remainder go to the lower partition index.
std::array<std::size_t, 3> largest_remainder_counts(
    std::size_t n, const std::array<double, 3>& ratios);

/// Streaming PMID join. Full-text sections are the large side: up to
/// `spill_threshold` of them stay in memory, after which all section records
/// are kept in a temporary spill file and only a PMID -> offset index stays
/// resident. Citations must already pass the ingest filters.
class JoinBuilder {
 public:
  struct Options {
    std::size_t spill_threshold = 500000;
    std::filesystem::path spill_path;  // defaults to a sibling of the output
  };

  explicit JoinBuilder(Options options);
  ~JoinBuilder();
  JoinBuilder(const JoinBuilder&) = delete;
  JoinBuilder& operator=(const JoinBuilder&) = delete;

  /// First occurrence of a PMID wins; duplicates are counted and dropped.
  void add_sections(FullTextSections sections);
  void add_citation(CitationMetadata citation);

  /// Emits joined records in ascending numeric PMID order.
  std::size_t emit_joined(const std::function<void(const ArticleRecord&)>& sink);

  std::size_t sections_seen() const { return sections_seen_; }
  std::size_t citations_seen() const { return citations_seen_; }
  std::size_t duplicate_sections() const { return duplicate_sections_; }
  std::size_t duplicate_citations() const { return duplicate_citations_; }
  bool spilled() const { return spilled_; }

 private:
  void spill_all();
  void spill_one(const std::string& pmid, const FullTextSections& sections);
  FullTextSections load_sections(const std::string& pmid);

  Options options_;
  std::map<std::string, FullTextSections> in_memory_;
  std::map<std::string, std::pair<std::uint64_t, std::uint32_t>> spill_index_;
  std::filesystem::path spill_file_;
  bool spilled_ = false;
  std::size_t sections_seen_ = 0;
  std::size_t citations_seen_ = 0;
  std::size_t duplicate_sections_ = 0;
  std::size_t duplicate_citations_ = 0;
  std::map<std::string, CitationMetadata> citations_;
};

}  // namespace meshidx::corpus

#endif  // MESHIDX_CORPUS_PIPELINE_HPP
