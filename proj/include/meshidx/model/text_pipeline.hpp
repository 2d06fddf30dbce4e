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

#ifndef MESHIDX_MODEL_TEXT_PIPELINE_HPP
#define MESHIDX_MODEL_TEXT_PIPELINE_HPP

#include <array>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "meshidx/corpus/record.hpp"
#include "meshidx/mesh/graph.hpp"
#include "meshidx/mesh/vocabulary.hpp"
#include "meshidx/model/config.hpp"
#include "meshidx/nn/tensor.hpp"

namespace meshidx::model {

inline constexpr long kPadId = 0;
inline constexpr long kUnkId = 1;

/// Token -> id map with reserved <pad>=0 and <unk>=1 rows. Built from the
/// training split with a minimum-frequency cut; ties order by token so the
/// mapping is reproducible.
class WordVocab {
 public:
  WordVocab() = default;

  static WordVocab build(std::span<const corpus::ArticleRecord> train_records,
                         const ModelConfig& config);
  /// Rebuilds from a saved token list (including the two reserved entries).
  static WordVocab from_tokens(std::vector<std::string> tokens);

  long id(std::string_view token) const;
  long size() const { return static_cast<long>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, long> index_;
};

/// Raw text routed to one model channel (title+abstract merged; figure and
/// table captions are not model inputs).
std::string channel_text(const corpus::ArticleRecord& record, int channel);

/// One document ready for the network: per-channel padded id sequences, the
/// unpadded lengths, and gold label ordinals.
struct TokenizedDoc {
  std::string pmid;
  std::array<std::vector<nn::Index>, kNumChannels> channel_ids;
  std::array<nn::Index, kNumChannels> real_lengths{};
  std::vector<nn::Index> labels;
};

/// Tokenizes, truncates/pads each active channel to its configured length,
/// and maps gold MeSH UIs to ordinals. Throws corpus::SchemaError when a
/// gold UI is outside the descriptor vocabulary, std::invalid_argument when
/// an active channel has no tokens.
TokenizedDoc prepare_doc(const corpus::ArticleRecord& record,
                         const WordVocab& vocab,
                         const mesh::MeshVocabulary& mesh_vocab,
                         const ModelConfig& config);

/// 0/1 target vector of length L.
nn::Tensor target_vector(std::span<const nn::Index> labels, nn::Index label_count);

/// Label-name embedding matrix for runs without a pretrained embedding file.
/// Name tokens found in the word vocabulary use their rows of `table`;
/// tokens outside it get a deterministic hash-seeded vector instead of zero,
/// because an all-zero label matrix collapses the label pathway (H stays
/// zero and no gradient can recover it).
nn::Tensor fallback_label_embeddings(const mesh::MeshVocabulary& mesh_vocab,
                                     const WordVocab& vocab,
                                     const nn::Tensor& table,
                                     std::uint64_t seed);

}  // namespace meshidx::model

#endif  // MESHIDX_MODEL_TEXT_PIPELINE_HPP
