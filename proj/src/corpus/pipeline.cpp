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

#include "meshidx/corpus/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "meshidx/util.hpp"

namespace meshidx::corpus {

namespace {

std::int64_t whitespace_token_count(const std::string& text) {
  std::int64_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

}  // namespace

bool filter_citation(const CitationMetadata& citation) {
  return citation.language == "eng" &&
         citation.indexing_mode == IndexingMode::kHuman;
}

bool passes_ingest_filters(const CitationMetadata& citation) {
  return filter_citation(citation) && citation.year.has_value();
}

std::vector<ArticleRecord> join_records(
    const std::map<std::string, FullTextSections>& sections,
    const std::map<std::string, CitationMetadata>& citations) {
  std::vector<const std::string*> shared;
  for (const auto& [pmid, _] : sections) {
    if (citations.contains(pmid)) {
      shared.push_back(&pmid);
    }
  }
  std::sort(shared.begin(), shared.end(),
            [](const std::string* a, const std::string* b) {
              return pmid_less(*a, *b);
            });

  std::vector<ArticleRecord> out;
  out.reserve(shared.size());
  for (const std::string* pmid : shared) {
    ArticleRecord record{sections.at(*pmid), citations.at(*pmid)};
    validate_record(record);
    out.push_back(std::move(record));
  }
  return out;
}

void StatsAccumulator::add(const ArticleRecord& record) {
  ++records_;
  for (int s = 0; s < kSectionCount; ++s) {
    const auto& section = record.sections.sections[static_cast<std::size_t>(s)];
    if (section.has_value()) {
      ++counts_[static_cast<std::size_t>(s)];
      token_totals_[static_cast<std::size_t>(s)] +=
          whitespace_token_count(*section);
    }
  }
}

SectionStats StatsAccumulator::finish() const {
  SectionStats stats;
  stats.total_records = records_;
  for (int s = 0; s < kSectionCount; ++s) {
    auto i = static_cast<std::size_t>(s);
    stats.articles[i] = counts_[i];
    stats.average_length[i] =
        counts_[i] == 0 ? 0.0
                        : static_cast<double>(token_totals_[i]) /
                              static_cast<double>(counts_[i]);
  }
  return stats;
}

std::string SectionStats::to_json() const {
  nlohmann::ordered_json out;
  out["records"] = total_records;
  nlohmann::ordered_json sections;
  for (int s = 0; s < kSectionCount; ++s) {
    auto i = static_cast<std::size_t>(s);
    sections[std::string(kSectionKeys[i])] = {
        {"articles", articles[i]},
        {"average_length", average_length[i]},
    };
  }
  out["sections"] = std::move(sections);
  return out.dump(2);
}

SectionStats corpus_stats(std::span<const ArticleRecord> records) {
  StatsAccumulator acc;
  for (const ArticleRecord& record : records) {
    acc.add(record);
  }
  return acc.finish();
}

bool is_complete(const ArticleRecord& record) {
  static constexpr std::array<Section, 6> kRequired = {
      Section::kTitle,   Section::kAbstract, Section::kIntro,
      Section::kMethods, Section::kResults,  Section::kDiscuss,
  };
  for (Section s : kRequired) {
    if (!record.sections.has(s)) {
      return false;
    }
  }
  return true;
}

std::vector<ArticleRecord> select_complete(std::span<const ArticleRecord> records) {
  std::vector<ArticleRecord> out;
  for (const ArticleRecord& record : records) {
    if (is_complete(record)) {
      out.push_back(record);
    }
  }
  return out;
}

void SplitSpec::validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0) {
      throw std::invalid_argument("split ratios must be non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
}

std::array<std::size_t, 3> largest_remainder_counts(
    std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double quota = ratios[static_cast<std::size_t>(i)] * static_cast<double>(n);
    counts[static_cast<std::size_t>(i)] =
        static_cast<std::size_t>(std::floor(quota));
    remainders[static_cast<std::size_t>(i)] =
        quota - std::floor(quota);
    assigned += counts[static_cast<std::size_t>(i)];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ra = remainders[static_cast<std::size_t>(a)];
    double rb = remainders[static_cast<std::size_t>(b)];
    if (ra != rb) {
      return ra > rb;
    }
    return a < b;
  });
  for (std::size_t leftover = n - assigned, i = 0; i < leftover; ++i) {
    ++counts[static_cast<std::size_t>(order[i % 3])];
  }
  return counts;
}

SplitResult stratified_split(std::span<const ArticleRecord> records,
                             const SplitSpec& spec) {
  spec.validate();

  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& year = records[i].citation.year;
    if (!year.has_value()) {
      throw std::invalid_argument("record " + records[i].pmid() +
                                  " has no publication year; cannot stratify");
    }
    by_year[*year].push_back(i);
  }

  std::mt19937_64 rng(spec.seed);
  SplitResult out;
  for (auto& [year, indices] : by_year) {
    deterministic_shuffle(indices, rng);
    auto counts = largest_remainder_counts(indices.size(), spec.ratios);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < counts[0]; ++i) {
      out.train.push_back(records[indices[cursor++]]);
    }
    for (std::size_t i = 0; i < counts[1]; ++i) {
      out.validation.push_back(records[indices[cursor++]]);
    }
    for (std::size_t i = 0; i < counts[2]; ++i) {
      out.test.push_back(records[indices[cursor++]]);
    }
  }
  return out;
}

JoinBuilder::JoinBuilder(Options options) : options_(std::move(options)) {
  if (options_.spill_path.empty()) {
    options_.spill_path =
        std::filesystem::temp_directory_path() / "meshidx-join-spill.jsonl";
  }
}

JoinBuilder::~JoinBuilder() {
  if (spilled_) {
    std::error_code ec;
    std::filesystem::remove(spill_file_, ec);
  }
}

void JoinBuilder::add_sections(FullTextSections sections) {
  ++sections_seen_;
  const std::string pmid = sections.pmid;
  if (in_memory_.contains(pmid) || spill_index_.contains(pmid)) {
    ++duplicate_sections_;
    return;
  }
  if (!spilled_ && in_memory_.size() >= options_.spill_threshold) {
    spill_all();
  }
  if (spilled_) {
    spill_one(pmid, sections);
  } else {
    in_memory_.emplace(pmid, std::move(sections));
  }
}

void JoinBuilder::add_citation(CitationMetadata citation) {
  ++citations_seen_;
  const std::string pmid = citation.pmid;
  if (citations_.contains(pmid)) {
    ++duplicate_citations_;
    return;
  }
  citations_.emplace(pmid, std::move(citation));
}

void JoinBuilder::spill_all() {
  spill_file_ = options_.spill_path;
  std::ofstream out(spill_file_, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot create join spill file: " +
                             spill_file_.string());
  }
  out.close();
  spilled_ = true;
  for (auto& [pmid, sections] : in_memory_) {
    spill_one(pmid, sections);
  }
  in_memory_.clear();
}

void JoinBuilder::spill_one(const std::string& pmid,
                            const FullTextSections& sections) {
  std::ofstream out(spill_file_, std::ios::binary | std::ios::app);
  if (!out) {
    throw std::runtime_error("cannot append to join spill file: " +
                             spill_file_.string());
  }
  std::string line = emit_sections(sections);
  auto offset = static_cast<std::uint64_t>(out.tellp());
  out << line << '\n';
  if (!out.good()) {
    throw std::runtime_error("error writing join spill file");
  }
  spill_index_.emplace(pmid,
                       std::make_pair(offset, static_cast<std::uint32_t>(line.size())));
}

FullTextSections JoinBuilder::load_sections(const std::string& pmid) {
  auto it = spill_index_.find(pmid);
  if (it == spill_index_.end()) {
    throw std::logic_error("join spill index missing pmid " + pmid);
  }
  std::ifstream in(spill_file_, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot reopen join spill file");
  }
  in.seekg(static_cast<std::streamoff>(it->second.first));
  std::string line(it->second.second, '\0');
  in.read(line.data(), static_cast<std::streamsize>(line.size()));
  if (!in.good()) {
    throw std::runtime_error("error reading join spill file");
  }
  return parse_sections(line);
}

std::size_t JoinBuilder::emit_joined(
    const std::function<void(const ArticleRecord&)>& sink) {
  std::vector<const std::string*> shared;
  auto collect = [&](const std::string& pmid) {
    if (citations_.contains(pmid)) {
      shared.push_back(&pmid);
    }
  };
  for (const auto& [pmid, _] : in_memory_) {
    collect(pmid);
  }
  for (const auto& [pmid, _] : spill_index_) {
    collect(pmid);
  }
  std::sort(shared.begin(), shared.end(),
            [](const std::string* a, const std::string* b) {
              return pmid_less(*a, *b);
            });

  for (const std::string* pmid : shared) {
    ArticleRecord record;
    auto mem = in_memory_.find(*pmid);
    record.sections =
        mem != in_memory_.end() ? mem->second : load_sections(*pmid);
    record.citation = citations_.at(*pmid);
    validate_record(record);
    sink(record);
  }
  return shared.size();
}

}  // namespace meshidx::corpus
