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

#include "meshidx/mesh/vocabulary.hpp"

#include <sstream>
#include <stdexcept>

#include "meshidx/util.hpp"

namespace meshidx::mesh {

MeshVocabulary::MeshVocabulary(std::vector<MeshDescriptor> descriptors)
    : descriptors_(std::move(descriptors)) {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    auto [_, inserted] = index_.emplace(descriptors_[i].ui, i);
    if (!inserted) {
      throw std::runtime_error("duplicate descriptor UI: " + descriptors_[i].ui);
    }
  }
}

std::optional<std::size_t> MeshVocabulary::ordinal(std::string_view ui) const {
  auto it = index_.find(std::string(ui));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

MeshVocabulary MeshVocabulary::parse(std::string_view tsv_text) {
  std::vector<MeshDescriptor> descriptors;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= tsv_text.size()) {
    std::size_t end = tsv_text.find('\n', begin);
    if (end == std::string_view::npos) {
      end = tsv_text.size();
    }
    std::string_view line = tsv_text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      if (begin > tsv_text.size()) {
        break;
      }
      continue;
    }

    std::size_t tab1 = line.find('\t');
    std::size_t tab2 = tab1 == std::string_view::npos
                           ? std::string_view::npos
                           : line.find('\t', tab1 + 1);
    if (tab1 == std::string_view::npos || tab2 == std::string_view::npos ||
        line.find('\t', tab2 + 1) != std::string_view::npos) {
      throw std::runtime_error("descriptor file line " + std::to_string(line_no) +
                               ": expected 3 tab-separated fields");
    }
    MeshDescriptor d;
    d.ui = std::string(line.substr(0, tab1));
    d.name = normalize_text(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (d.ui.empty() || d.name.empty()) {
      throw std::runtime_error("descriptor file line " + std::to_string(line_no) +
                               ": empty UI or name");
    }
    std::string_view trees = line.substr(tab2 + 1);
    std::size_t t = 0;
    while (t < trees.size()) {
      std::size_t semi = trees.find(';', t);
      if (semi == std::string_view::npos) {
        semi = trees.size();
      }
      std::string_view tree = trees.substr(t, semi - t);
      if (!tree.empty()) {
        d.tree_numbers.emplace_back(tree);
      }
      t = semi + 1;
    }
    descriptors.push_back(std::move(d));
  }
  return MeshVocabulary(std::move(descriptors));
}

MeshVocabulary MeshVocabulary::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

}  // namespace meshidx::mesh
