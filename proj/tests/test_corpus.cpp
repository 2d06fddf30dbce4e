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

#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "meshidx/corpus/bioc.hpp"
#include "meshidx/corpus/medline.hpp"
#include "meshidx/corpus/pipeline.hpp"
#include "meshidx/corpus/record.hpp"
#include "meshidx/util.hpp"
#include "meshidx/xml.hpp"

using namespace meshidx;
using namespace meshidx::corpus;
using meshidx::testing::fixture;

namespace {

FullTextSections make_sections(const std::string& pmid) {
  FullTextSections s;
  s.pmid = pmid;
  s.section(Section::kTitle) = "Title of " + pmid;
  return s;
}

CitationMetadata make_citation(const std::string& pmid, int year = 2015) {
  CitationMetadata c;
  c.pmid = pmid;
  c.language = "eng";
  c.journal = "J";
  c.year = year;
  c.mesh["D000001"] = "Calcimycin";
  return c;
}

ArticleRecord make_record(const std::string& pmid, int year = 2015) {
  return ArticleRecord{make_sections(pmid), make_citation(pmid, year)};
}

std::string random_text(std::mt19937_64& rng, bool allow_empty = false) {
  static const std::vector<std::string> pieces = {
      "alpha", "beta",  "gamma", "spike", "neuron", "carbon",
      "\"quoted\"", "back\\slash", "étude", "42",
  };
  std::size_t n = rng() % 6 + (allow_empty ? 0 : 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += pieces[rng() % pieces.size()];
  }
  return out;
}

ArticleRecord random_record(std::mt19937_64& rng) {
  ArticleRecord r;
  std::string pmid = std::to_string(rng() % 90000000 + 1);
  r.sections.pmid = pmid;
  r.citation.pmid = pmid;
  r.sections.section(Section::kTitle) = random_text(rng);
  for (int s = 1; s < kSectionCount; ++s) {
    if (rng() % 3 != 0) {
      r.sections.sections[static_cast<std::size_t>(s)] = random_text(rng);
    }
  }
  r.citation.language = "eng";
  r.citation.journal = random_text(rng);
  if (rng() % 4 != 0) {
    r.citation.year = static_cast<int>(rng() % 200 + 1820);
  }
  if (rng() % 2 == 0) {
    r.citation.doi = "10.1000/" + std::to_string(rng() % 10000);
  }
  std::size_t authors = rng() % 3;
  for (std::size_t i = 0; i < authors; ++i) {
    r.citation.authors.push_back(random_text(rng) + "," + random_text(rng));
  }
  std::size_t mesh_n = rng() % 4;
  for (std::size_t i = 0; i < mesh_n; ++i) {
    r.citation.mesh["D" + std::to_string(rng() % 999999 + 1)] = random_text(rng);
  }
  if (rng() % 2 == 0) {
    r.citation.chemicals.push_back(random_text(rng));
  }
  if (rng() % 3 == 0) {
    r.citation.suppl_mesh.push_back(random_text(rng));
  }
  return r;
}

}  // namespace

TEST_CASE("parse_bioc_article extracts the eight mapped sections") {
  std::string xml = read_file(fixture("bioc/a_27976717.xml"));
  FullTextSections s = parse_bioc_article(xml);
  CHECK(s.pmid == "27976717");
  CHECK(*s.section(Section::kTitle) ==
        "Temporal pairwise spike correlations fully capture single-neuron "
        "information");
  CHECK(s.has(Section::kAbstract));
  CHECK(s.has(Section::kTableCaptions));
  // The two FIG passages concatenate in document order.
  CHECK(*s.section(Section::kFigCaptions) ==
        "Dimensionality of neural information coding. Pairwise correlations "
        "predict information rates.");
}

TEST_CASE("parse_bioc_article leaves missing sections absent") {
  std::string xml = read_file(fixture("bioc/b_11111.xml"));
  FullTextSections s = parse_bioc_article(xml);
  CHECK_FALSE(s.has(Section::kTableCaptions));
  CHECK_FALSE(s.has(Section::kMethods));
  // Two INTRO passages "A." and "B." join with a single space.
  CHECK(*s.section(Section::kIntro) == "A. B.");
  // The ACK passage maps to no section.
  CHECK_FALSE(s.has(Section::kResults));
}

TEST_CASE("parse_bioc_article error paths") {
  CHECK_THROWS_AS(parse_bioc_article("<collection><document"), xml::ParseError);
  // Well-formed but no id.
  CHECK_THROWS_AS(
      parse_bioc_article("<document><passage><infon key=\"section_type\">TITLE"
                         "</infon><text>t</text></passage></document>"),
      SchemaError);
  // No TITLE passage.
  CHECK_THROWS_AS(parse_bioc_article("<document><id>1</id></document>"),
                  SchemaError);
}

TEST_CASE("parse_medline_citation extracts the metadata fields") {
  std::string xml = read_file(fixture("medline/m1_27976717.xml"));
  CitationMetadata c = parse_medline_citation(xml);
  CHECK(c.pmid == "27976717");
  CHECK(c.journal == "Nature communications");
  CHECK(c.year == 2016);
  CHECK(c.language == "eng");
  CHECK(c.indexing_mode == IndexingMode::kHuman);
  CHECK(c.doi == "10.1038/ncomms13805");
  REQUIRE(c.authors.size() == 3);
  CHECK(c.authors[0] == "Amadeus,Dettner");
  REQUIRE(c.mesh.count("D000200") == 1);
  CHECK(c.mesh.at("D000200") == "Action Potentials");
  CHECK(c.mesh.size() == 4);
  // No chemical list or SCRs in this citation.
  CHECK(c.chemicals.empty());
  CHECK(c.suppl_mesh.empty());
}

TEST_CASE("parse_medline_citation reads modes, chemicals and collectives") {
  CitationMetadata curated =
      parse_medline_citation(read_file(fixture("medline/m3_22222_curated.xml")));
  CHECK(curated.indexing_mode == IndexingMode::kCurated);

  CitationMetadata c =
      parse_medline_citation(read_file(fixture("medline/m2_11111.xml")));
  CHECK(c.chemicals == std::vector<std::string>{"Oxygen"});
  CHECK(c.suppl_mesh == std::vector<std::string>{"Test Substance Record"});
  REQUIRE(c.authors.size() == 2);
  CHECK(c.authors[1] == "The Fixture Consortium");
  CHECK_FALSE(c.doi.has_value());  // still a valid record
}

TEST_CASE("parse_medline_citation schema errors") {
  CHECK_THROWS_AS(parse_medline_citation("<MedlineCitation><Article/>"
                                         "</MedlineCitation>"),
                  SchemaError);
  CHECK_THROWS_AS(
      parse_medline_citation(
          "<MedlineCitation IndexingMethod=\"Weird\"><PMID>5</PMID>"
          "<Article/></MedlineCitation>"),
      SchemaError);
}

TEST_CASE("gzip-compressed baseline files stream transparently") {
  std::vector<CitationMetadata> out;
  std::size_t n = stream_medline_file(fixture("medline/m4_33333_fre.xml.gz"),
                                      [&](CitationMetadata c) {
                                        out.push_back(std::move(c));
                                      });
  REQUIRE(n == 1);
  CHECK(out[0].pmid == "33333");
  CHECK(out[0].language == "fre");
}

TEST_CASE("filter_citation keeps human-indexed English citations only") {
  CitationMetadata c = make_citation("1");
  c.language = "eng";
  c.indexing_mode = IndexingMode::kHuman;
  CHECK(filter_citation(c));
  c.indexing_mode = IndexingMode::kCurated;
  CHECK_FALSE(filter_citation(c));
  c.indexing_mode = IndexingMode::kAuto;
  CHECK_FALSE(filter_citation(c));
  c.indexing_mode = IndexingMode::kHuman;
  c.language = "fre";
  CHECK_FALSE(filter_citation(c));

  // The ingest gate additionally requires a year for stratification.
  CitationMetadata no_year = make_citation("2");
  no_year.year.reset();
  CHECK(filter_citation(no_year));
  CHECK_FALSE(passes_ingest_filters(no_year));
}

TEST_CASE("join_records intersects and sorts numerically") {
  std::map<std::string, FullTextSections> sections;
  std::map<std::string, CitationMetadata> citations;
  sections["1"] = make_sections("1");
  sections["2"] = make_sections("2");
  citations["2"] = make_citation("2");
  citations["3"] = make_citation("3");
  auto joined = join_records(sections, citations);
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].pmid() == "2");

  SUBCASE("five sections by four citations with three shared pmids") {
    sections.clear();
    citations.clear();
    for (const char* p : {"10", "9", "100", "7", "55"}) {
      sections[p] = make_sections(p);
    }
    for (const char* p : {"9", "100", "55", "12345"}) {
      citations[p] = make_citation(p);
    }
    auto out = join_records(sections, citations);
    REQUIRE(out.size() == 3);
    CHECK(out[0].pmid() == "9");
    CHECK(out[1].pmid() == "55");
    CHECK(out[2].pmid() == "100");
  }

  SUBCASE("empty sections map yields empty output") {
    CHECK(join_records({}, citations).empty());
  }

  SUBCASE("output pmid set equals the key intersection") {
    std::mt19937_64 rng(11);
    sections.clear();
    citations.clear();
    for (int i = 0; i < 60; ++i) {
      std::string p = std::to_string(rng() % 80 + 1);
      if (rng() % 2 == 0) {
        sections[p] = make_sections(p);
      }
      if (rng() % 2 == 0) {
        citations[p] = make_citation(p);
      }
    }
    std::set<std::string> expected;
    for (const auto& [p, _] : sections) {
      if (citations.count(p)) {
        expected.insert(p);
      }
    }
    auto out = join_records(sections, citations);
    CHECK(out.size() == expected.size());
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      CHECK(pmid_less(out[i].pmid(), out[i + 1].pmid()));
    }
    for (const auto& r : out) {
      CHECK(expected.count(r.pmid()) == 1);
    }
  }
}

TEST_CASE("emit_record writes the canonical key order") {
  ArticleRecord r = make_record("27976717");
  r.citation.mesh = {{"D000200", "Action Potentials"},
                     {"D008959", "Models, Neurological"},
                     {"D009474", "Neurons"},
                     {"D059010", "Single-Cell Analysis"}};
  std::string json = emit_record(r);

  const std::vector<std::string> keys = {
      "\"PMID\"",    "\"TITLE\"",        "\"ABSTRACT\"",  "\"INTRO\"",
      "\"METHODS\"", "\"RESULTS\"",      "\"DISCUSS\"",   "\"FIG_CAPTIONS\"",
      "\"TABLE_CAPTIONS\"", "\"JOURNAL\"", "\"YEAR\"",    "\"DOI\"",
      "\"AUTHORS\"", "\"MeSH\"",         "\"CHEMICALS\"", "\"SUPPLMeSH\""};
  std::size_t last = 0;
  for (const std::string& key : keys) {
    std::size_t at = json.find(key);
    REQUIRE(at != std::string::npos);
    CHECK(at > last);
    last = at;
  }
  // The MeSH object carries exactly the four pairs in UI order.
  CHECK(json.find("\"MeSH\":{\"D000200\":\"Action Potentials\","
                  "\"D008959\":\"Models, Neurological\","
                  "\"D009474\":\"Neurons\","
                  "\"D059010\":\"Single-Cell Analysis\"}") != std::string::npos);
  // Absent sections serialize as "None".
  CHECK(json.find("\"TABLE_CAPTIONS\":\"None\"") != std::string::npos);
}

TEST_CASE("parse_record is the inverse of emit_record") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 100; ++i) {
    ArticleRecord r = random_record(rng);
    ArticleRecord back = parse_record(emit_record(r));
    CHECK(back == r);
  }
}

TEST_CASE("parse_record rejects malformed lines") {
  CHECK_THROWS_AS(parse_record("not json"), SchemaError);
  CHECK_THROWS_AS(parse_record("{\"PMID\":\"1\"}"), SchemaError);
  ArticleRecord r = make_record("8");
  std::string json = emit_record(r);
  std::string bad = json;
  bad.replace(bad.find("\"YEAR\":\"2015\""), 13, "\"YEAR\":\"20xx\"");
  CHECK_THROWS_AS(parse_record(bad), SchemaError);
}

TEST_CASE("corpus_stats counts sections and averages token lengths") {
  ArticleRecord a = make_record("1");
  a.sections.section(Section::kTitle) = "one two three";
  ArticleRecord b = make_record("2");
  b.sections.section(Section::kTitle) = "a b c d e";
  SectionStats stats = corpus_stats(std::vector<ArticleRecord>{a, b});
  CHECK(stats.articles[0] == 2);
  CHECK(stats.average_length[0] == doctest::Approx(4.0));
  // No document has tables: count 0, average 0.
  CHECK(stats.articles[7] == 0);
  CHECK(stats.average_length[7] == 0.0);
}

TEST_CASE("select_complete requires the six text sections") {
  ArticleRecord complete = make_record("1");
  for (int s = 1; s < 6; ++s) {
    complete.sections.sections[static_cast<std::size_t>(s)] = "text";
  }
  ArticleRecord missing_results = complete;
  missing_results.sections.section(Section::kResults).reset();

  auto kept = select_complete(std::vector<ArticleRecord>{complete, missing_results});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].pmid() == "1");
  // Captions are not part of the completeness requirement.
  CHECK_FALSE(kept[0].sections.has(Section::kTableCaptions));
}

TEST_CASE("stratified_split honors per-year ratios") {
  std::vector<ArticleRecord> records;
  for (int year : {2001, 2002, 2003}) {
    for (int i = 0; i < 10; ++i) {
      records.push_back(
          make_record(std::to_string(year * 100 + i), year));
    }
  }
  SplitSpec spec;
  spec.ratios = {0.8, 0.1, 0.1};
  spec.seed = 17;
  SplitResult split = stratified_split(records, spec);

  // Per-year counting oracle: 10 docs and (0.8, 0.1, 0.1) give 8/1/1.
  std::map<int, std::array<int, 3>> per_year;
  for (const auto& r : split.train) per_year[*r.citation.year][0]++;
  for (const auto& r : split.validation) per_year[*r.citation.year][1]++;
  for (const auto& r : split.test) per_year[*r.citation.year][2]++;
  for (int year : {2001, 2002, 2003}) {
    CHECK(per_year[year][0] == 8);
    CHECK(per_year[year][1] == 1);
    CHECK(per_year[year][2] == 1);
  }

  SUBCASE("partitions are disjoint and exhaustive") {
    std::set<std::string> seen;
    for (const auto* part : {&split.train, &split.validation, &split.test}) {
      for (const auto& r : *part) {
        CHECK(seen.insert(r.pmid()).second);
      }
    }
    CHECK(seen.size() == records.size());
  }

  SUBCASE("identical seeds reproduce identical partitions") {
    SplitResult again = stratified_split(records, spec);
    REQUIRE(again.train.size() == split.train.size());
    for (std::size_t i = 0; i < split.train.size(); ++i) {
      CHECK(again.train[i].pmid() == split.train[i].pmid());
    }
    SplitSpec other = spec;
    other.seed = 18;
    SplitResult different = stratified_split(records, other);
    bool all_equal = different.train.size() == split.train.size();
    if (all_equal) {
      for (std::size_t i = 0; i < split.train.size(); ++i) {
        all_equal = all_equal &&
                    different.train[i].pmid() == split.train[i].pmid();
      }
    }
    CHECK_FALSE(all_equal);
  }

  SUBCASE("degenerate ratios put everything in train") {
    SplitSpec all_train;
    all_train.ratios = {1.0, 0.0, 0.0};
    SplitResult out = stratified_split(records, all_train);
    CHECK(out.train.size() == records.size());
    CHECK(out.validation.empty());
    CHECK(out.test.empty());
  }

  SUBCASE("per-year deviation from exact quota is at most one") {
    std::mt19937_64 rng(5);
    std::vector<ArticleRecord> uneven;
    for (int year = 1990; year < 1996; ++year) {
      std::size_t docs = rng() % 13 + 1;
      for (std::size_t i = 0; i < docs; ++i) {
        uneven.push_back(make_record(
            std::to_string(year) + std::to_string(i), year));
      }
    }
    SplitSpec s2;
    s2.ratios = {0.6, 0.2, 0.2};
    SplitResult out = stratified_split(uneven, s2);
    std::map<int, std::array<double, 3>> counts;
    for (const auto& r : out.train) counts[*r.citation.year][0]++;
    for (const auto& r : out.validation) counts[*r.citation.year][1]++;
    for (const auto& r : out.test) counts[*r.citation.year][2]++;
    std::map<int, int> totals;
    for (const auto& r : uneven) totals[*r.citation.year]++;
    for (const auto& [year, c] : counts) {
      for (int p = 0; p < 3; ++p) {
        double quota = s2.ratios[static_cast<std::size_t>(p)] * totals[year];
        CHECK(std::abs(c[static_cast<std::size_t>(p)] - quota) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("stratified_split validates ratios and years") {
  SplitSpec bad;
  bad.ratios = {0.5, 0.2, 0.2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ArticleRecord no_year = make_record("1");
  no_year.citation.year.reset();
  SplitSpec ok;
  CHECK_THROWS_AS(stratified_split(std::vector<ArticleRecord>{no_year}, ok),
                  std::invalid_argument);
}

TEST_CASE("JoinBuilder spills to disk past the threshold") {
  meshidx::testing::TempDir tmp("join-spill");
  JoinBuilder::Options options;
  options.spill_threshold = 3;
  options.spill_path = tmp.file("spill.jsonl");
  JoinBuilder builder(options);

  for (int i = 1; i <= 8; ++i) {
    builder.add_sections(make_sections(std::to_string(i)));
    builder.add_citation(make_citation(std::to_string(i)));
  }
  builder.add_sections(make_sections("3"));  // duplicate, dropped
  CHECK(builder.spilled());
  CHECK(builder.duplicate_sections() == 1);

  std::vector<std::string> pmids;
  std::size_t joined = builder.emit_joined(
      [&](const ArticleRecord& r) { pmids.push_back(r.pmid()); });
  CHECK(joined == 8);
  REQUIRE(pmids.size() == 8);
  for (int i = 1; i <= 8; ++i) {
    CHECK(pmids[static_cast<std::size_t>(i - 1)] == std::to_string(i));
  }
}

TEST_CASE("normalize_text collapses whitespace and strips controls") {
  CHECK(normalize_text("  a\t b\nc  ") == "a b c");
  CHECK(normalize_text("x\x01y") == "xy");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text(" \n\t ") == "");
}
