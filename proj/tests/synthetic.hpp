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

// Synthetic labeled corpora for training tests: every label has a signature
// token; documents carry the signature tokens of their gold labels inside
// their text sections, so a working model can learn the mapping.

#ifndef MESHIDX_TESTS_SYNTHETIC_HPP
#define MESHIDX_TESTS_SYNTHETIC_HPP

#include <random>
#include <string>
#include <vector>

#include "meshidx/corpus/record.hpp"
#include "meshidx/mesh/vocabulary.hpp"
#include "meshidx/util.hpp"

namespace meshidx::testing {

inline std::string signature_token(int label) {
  return "marker" + std::to_string(label);
}

inline mesh::MeshVocabulary synthetic_mesh_vocabulary(int label_count) {
  std::vector<mesh::MeshDescriptor> descriptors;
  for (int l = 0; l < label_count; ++l) {
    mesh::MeshDescriptor d;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "D%06d", l + 1);
    d.ui = buf;
    d.name = "Concept " + std::to_string(l);
    // A shallow tree: ten top-level nodes, the rest children of them.
    if (l < 10) {
      d.tree_numbers = {"A" + std::to_string(l + 1)};
    } else {
      d.tree_numbers = {"A" + std::to_string(l % 10 + 1) + "." +
                        std::to_string(l / 10)};
    }
    descriptors.push_back(std::move(d));
  }
  return mesh::MeshVocabulary(std::move(descriptors));
}

inline std::string synthetic_mesh_tsv(int label_count) {
  mesh::MeshVocabulary vocab = synthetic_mesh_vocabulary(label_count);
  std::string out;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& d = vocab.at(i);
    out += d.ui + "\t" + d.name + "\t";
    for (std::size_t t = 0; t < d.tree_numbers.size(); ++t) {
      if (t > 0) {
        out += ";";
      }
      out += d.tree_numbers[t];
    }
    out += "\n";
  }
  return out;
}

struct SyntheticOptions {
  int documents = 32;
  int labels = 20;
  int labels_per_doc = 2;
  std::uint64_t seed = 1;
  /// Fraction of labels whose signature also shows up in title+abstract;
  /// the rest are visible only in the four full-text channels.
  double title_visible_fraction = 1.0;
  int filler_tokens = 8;
};

inline std::vector<corpus::ArticleRecord> synthetic_records(
    const SyntheticOptions& options) {
  std::mt19937_64 rng(options.seed);
  mesh::MeshVocabulary vocab = synthetic_mesh_vocabulary(options.labels);

  std::vector<bool> title_visible(static_cast<std::size_t>(options.labels));
  for (int l = 0; l < options.labels; ++l) {
    title_visible[static_cast<std::size_t>(l)] =
        uniform01(rng) < options.title_visible_fraction;
  }

  auto filler = [&]() {
    return " filler" + std::to_string(rng() % static_cast<std::uint64_t>(
                                                  options.filler_tokens));
  };

  std::vector<corpus::ArticleRecord> records;
  for (int i = 0; i < options.documents; ++i) {
    corpus::ArticleRecord r;
    const std::string pmid = std::to_string(100000 + i);
    r.sections.pmid = pmid;
    r.citation.pmid = pmid;
    r.citation.language = "eng";
    r.citation.journal = "Synthetic Journal";
    r.citation.year = 2018 + i % 3;

    std::vector<int> labels;
    for (int pick = 0; pick < options.labels_per_doc; ++pick) {
      int l = static_cast<int>(
          (static_cast<int>(rng() % static_cast<std::uint64_t>(options.labels)) +
           pick * 7 + i) %
          options.labels);
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
        labels.push_back(l);
      }
    }
    for (int l : labels) {
      const auto& d = vocab.at(static_cast<std::size_t>(l));
      r.citation.mesh[d.ui] = d.name;
    }

    std::string title_signal;
    std::string full_signal;
    for (int l : labels) {
      full_signal += " " + signature_token(l);
      if (title_visible[static_cast<std::size_t>(l)]) {
        title_signal += " " + signature_token(l);
      }
    }

    using corpus::Section;
    r.sections.section(Section::kTitle) = "study" + title_signal + filler();
    r.sections.section(Section::kAbstract) =
        "abstract" + title_signal + filler() + filler();
    r.sections.section(Section::kIntro) = "intro" + full_signal + filler();
    r.sections.section(Section::kMethods) = "methods" + full_signal + filler();
    r.sections.section(Section::kResults) = "results" + full_signal + filler();
    r.sections.section(Section::kDiscuss) = "discuss" + full_signal + filler();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace meshidx::testing

#endif  // MESHIDX_TESTS_SYNTHETIC_HPP
