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

#ifndef MESHIDX_MESH_GRAPH_HPP
#define MESHIDX_MESH_GRAPH_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meshidx/mesh/vocabulary.hpp"
#include "meshidx/nn/tensor.hpp"

namespace meshidx::mesh {

struct AdjacencyStats {
  std::size_t undirected_edges = 0;     // distinct off-diagonal pairs
  std::size_t multi_position_pairs = 0; // pairs linked via >1 tree-number pair
};

/// L x L adjacency over the descriptor hierarchy: 1 on the diagonal, 1
/// between i and j iff one of j's tree numbers extends one of i's by exactly
/// one dotted component (or vice versa). Symmetric by construction. With
/// `normalized` the matrix becomes D^-1/2 (A) D^-1/2.
nn::Tensor build_adjacency(const MeshVocabulary& vocabulary,
                           bool normalized = false,
                           AdjacencyStats* stats = nullptr);

/// Writes the nonzeros as `row <TAB> col <TAB> weight` lines (debug aid).
void export_adjacency_coo(const nn::Tensor& adjacency,
                          const std::filesystem::path& path);

/// Token source for label-name embeddings: returns a pointer to a d-length
/// vector, or nullptr for out-of-vocabulary tokens.
using EmbeddingLookup = std::function<const double*(std::string_view token)>;

/// Word-embedding text file: one token per line followed by d reals.
class WordEmbeddingFile {
 public:
  static WordEmbeddingFile load(const std::filesystem::path& path);
  static WordEmbeddingFile parse(std::string_view text);

  long dim() const { return dim_; }
  const double* lookup(std::string_view token) const;
  EmbeddingLookup lookup_fn() const;

 private:
  long dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Lowercases and splits a descriptor name on whitespace and commas.
std::vector<std::string> label_name_tokens(std::string_view name);

/// L x d matrix whose row i is the mean of the word vectors of descriptor
/// i's name tokens. Out-of-vocabulary tokens contribute zero vectors but
/// still count toward the mean's denominator. Throws on empty names.
nn::Tensor init_label_embeddings(const MeshVocabulary& vocabulary,
                                 const EmbeddingLookup& embeddings, long dim);

}  // namespace meshidx::mesh

#endif  // MESHIDX_MESH_GRAPH_HPP
