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

#include "meshidx/mesh/graph.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "meshidx/util.hpp"

namespace meshidx::mesh {

namespace {

/// Drops the last dotted component; empty result for top-level positions.
std::string_view parent_tree_number(std::string_view tree) {
  std::size_t dot = tree.rfind('.');
  if (dot == std::string_view::npos) {
    return {};
  }
  return tree.substr(0, dot);
}

}  // namespace

nn::Tensor build_adjacency(const MeshVocabulary& vocabulary, bool normalized,
                           AdjacencyStats* stats) {
  const auto l = static_cast<nn::Index>(vocabulary.size());
  nn::Tensor a = nn::Tensor::zeros({l, l});
  auto& values = a.values();
  for (nn::Index i = 0; i < l; ++i) {
    values[static_cast<std::size_t>(i * l + i)] = 1.0;
  }

  std::map<std::string_view, std::vector<std::size_t>> by_tree;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    for (const std::string& tree : vocabulary.at(i).tree_numbers) {
      by_tree[tree].push_back(i);
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_links;
  for (std::size_t child = 0; child < vocabulary.size(); ++child) {
    for (const std::string& tree : vocabulary.at(child).tree_numbers) {
      std::string_view parent_tree = parent_tree_number(tree);
      if (parent_tree.empty()) {
        continue;
      }
      auto it = by_tree.find(parent_tree);
      if (it == by_tree.end()) {
        continue;
      }
      for (std::size_t parent : it->second) {
        if (parent == child) {
          continue;
        }
        auto ci = static_cast<nn::Index>(child);
        auto pi = static_cast<nn::Index>(parent);
        values[static_cast<std::size_t>(ci * l + pi)] = 1.0;
        values[static_cast<std::size_t>(pi * l + ci)] = 1.0;
        auto key = std::minmax(child, parent);
        ++pair_links[{key.first, key.second}];
      }
    }
  }

  if (stats != nullptr) {
    stats->undirected_edges = pair_links.size();
    stats->multi_position_pairs = 0;
    for (const auto& [_, count] : pair_links) {
      if (count > 1) {
        ++stats->multi_position_pairs;
      }
    }
  }

  if (normalized) {
    std::vector<double> inv_sqrt_degree(static_cast<std::size_t>(l));
    for (nn::Index i = 0; i < l; ++i) {
      double degree = 0.0;
      for (nn::Index j = 0; j < l; ++j) {
        degree += values[static_cast<std::size_t>(i * l + j)];
      }
      inv_sqrt_degree[static_cast<std::size_t>(i)] =
          degree > 0.0 ? 1.0 / std::sqrt(degree) : 0.0;
    }
    for (nn::Index i = 0; i < l; ++i) {
      for (nn::Index j = 0; j < l; ++j) {
        values[static_cast<std::size_t>(i * l + j)] *=
            inv_sqrt_degree[static_cast<std::size_t>(i)] *
            inv_sqrt_degree[static_cast<std::size_t>(j)];
      }
    }
  }
  return a;
}

void export_adjacency_coo(const nn::Tensor& adjacency,
                          const std::filesystem::path& path) {
  const nn::Index l = adjacency.dim(0);
  std::ostringstream out;
  const auto& values = adjacency.values();
  for (nn::Index i = 0; i < l; ++i) {
    for (nn::Index j = 0; j < l; ++j) {
      double v = values[static_cast<std::size_t>(i * l + j)];
      if (v != 0.0) {
        out << i << '\t' << j << '\t' << v << '\n';
      }
    }
  }
  write_file(path, out.str());
}

WordEmbeddingFile WordEmbeddingFile::parse(std::string_view text) {
  WordEmbeddingFile out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string line(text.substr(begin, end - begin));
    begin = end + 1;
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
      continue;
    }
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> vec;
    double v;
    while (row >> v) {
      vec.push_back(v);
    }
    if (token.empty() || vec.empty()) {
      throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                               ": expected a token followed by reals");
    }
    if (out.dim_ == 0) {
      out.dim_ = static_cast<long>(vec.size());
    } else if (static_cast<long>(vec.size()) != out.dim_) {
      throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                               ": dimension mismatch");
    }
    out.vectors_[token] = std::move(vec);
  }
  return out;
}

WordEmbeddingFile WordEmbeddingFile::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const double* WordEmbeddingFile::lookup(std::string_view token) const {
  auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : it->second.data();
}

EmbeddingLookup WordEmbeddingFile::lookup_fn() const {
  return [this](std::string_view token) { return lookup(token); };
}

std::vector<std::string> label_name_tokens(std::string_view name) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : name) {
    if (std::isspace(c) || c == ',') {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

nn::Tensor init_label_embeddings(const MeshVocabulary& vocabulary,
                                 const EmbeddingLookup& embeddings, long dim) {
  const auto l = static_cast<nn::Index>(vocabulary.size());
  nn::Tensor out = nn::Tensor::zeros({l, static_cast<nn::Index>(dim)});
  auto& values = out.values();
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    const MeshDescriptor& d = vocabulary.at(i);
    std::vector<std::string> tokens = label_name_tokens(d.name);
    if (tokens.empty()) {
      throw std::runtime_error("descriptor " + d.ui + " has an empty name");
    }
    double* row = values.data() + static_cast<std::ptrdiff_t>(i) * dim;
    for (const std::string& token : tokens) {
      const double* vec = embeddings(token);
      if (vec == nullptr) {
        continue;  // OOV contributes a zero vector but still counts in m_i
      }
      for (long j = 0; j < dim; ++j) {
        row[j] += vec[j];
      }
    }
    const double inv = 1.0 / static_cast<double>(tokens.size());
    for (long j = 0; j < dim; ++j) {
      row[j] *= inv;
    }
  }
  return out;
}

}  // namespace meshidx::mesh
