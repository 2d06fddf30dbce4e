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

#include "meshidx/model/text_pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "meshidx/mesh/graph.hpp"
#include "meshidx/util.hpp"

namespace meshidx::model {

WordVocab WordVocab::build(std::span<const corpus::ArticleRecord> train_records,
                           const ModelConfig& config) {
  std::map<std::string, long> frequency;
  for (const corpus::ArticleRecord& record : train_records) {
    for (int channel = 0; channel < kNumChannels; ++channel) {
      for (std::string& token : tokenize(channel_text(record, channel))) {
        ++frequency[std::move(token)];
      }
    }
  }

  std::vector<std::pair<std::string, long>> kept;
  for (auto& [token, count] : frequency) {
    if (count >= config.min_token_freq) {
      kept.emplace_back(token, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });

  std::vector<std::string> tokens = {"<pad>", "<unk>"};
  tokens.reserve(kept.size() + 2);
  for (auto& [token, _] : kept) {
    tokens.push_back(token);
  }
  return from_tokens(std::move(tokens));
}

WordVocab WordVocab::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>") {
    throw std::invalid_argument(
        "word vocabulary must start with <pad> and <unk>");
  }
  WordVocab vocab;
  vocab.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    vocab.index_.emplace(vocab.tokens_[i], static_cast<long>(i));
  }
  return vocab;
}

long WordVocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

std::string channel_text(const corpus::ArticleRecord& record, int channel) {
  using corpus::Section;
  const corpus::FullTextSections& ft = record.sections;
  auto text_of = [&](Section s) {
    return ft.section(s).value_or(std::string());
  };
  switch (channel) {
    case 0: {
      std::string title = text_of(Section::kTitle);
      std::string abstract = text_of(Section::kAbstract);
      if (title.empty()) {
        return abstract;
      }
      if (abstract.empty()) {
        return title;
      }
      return title + " " + abstract;
    }
    case 1:
      return text_of(Section::kIntro);
    case 2:
      return text_of(Section::kMethods);
    case 3:
      return text_of(Section::kResults);
    case 4:
      return text_of(Section::kDiscuss);
    default:
      throw std::invalid_argument("channel index out of range");
  }
}

TokenizedDoc prepare_doc(const corpus::ArticleRecord& record,
                         const WordVocab& vocab,
                         const mesh::MeshVocabulary& mesh_vocab,
                         const ModelConfig& config) {
  TokenizedDoc doc;
  doc.pmid = record.pmid();
  for (int channel : config.active_channels) {
    const long max_len = config.channel_lengths[static_cast<std::size_t>(channel)];
    std::vector<std::string> tokens = tokenize(channel_text(record, channel));
    auto real = static_cast<nn::Index>(
        std::min<std::size_t>(tokens.size(), static_cast<std::size_t>(max_len)));
    if (real == 0) {
      throw std::invalid_argument(
          "document " + doc.pmid + " has no tokens in channel " +
          std::string(kChannelNames[static_cast<std::size_t>(channel)]));
    }
    auto& ids = doc.channel_ids[static_cast<std::size_t>(channel)];
    ids.assign(static_cast<std::size_t>(max_len), kPadId);
    for (nn::Index i = 0; i < real; ++i) {
      ids[static_cast<std::size_t>(i)] =
          vocab.id(tokens[static_cast<std::size_t>(i)]);
    }
    doc.real_lengths[static_cast<std::size_t>(channel)] = real;
  }

  for (const auto& [ui, _] : record.citation.mesh) {
    auto ordinal = mesh_vocab.ordinal(ui);
    if (!ordinal) {
      throw corpus::SchemaError("document " + doc.pmid + " carries MeSH UI " +
                                ui + " absent from the descriptor vocabulary");
    }
    doc.labels.push_back(static_cast<nn::Index>(*ordinal));
  }
  std::sort(doc.labels.begin(), doc.labels.end());
  return doc;
}

nn::Tensor target_vector(std::span<const nn::Index> labels, nn::Index label_count) {
  nn::Tensor t = nn::Tensor::zeros({label_count});
  for (nn::Index l : labels) {
    if (l < 0 || l >= label_count) {
      throw std::out_of_range("label ordinal " + std::to_string(l) +
                              " outside [0, " + std::to_string(label_count) + ")");
    }
    t.values()[static_cast<std::size_t>(l)] = 1.0;
  }
  return t;
}

nn::Tensor fallback_label_embeddings(const mesh::MeshVocabulary& mesh_vocab,
                                     const WordVocab& vocab,
                                     const nn::Tensor& table,
                                     std::uint64_t seed) {
  const long d = static_cast<long>(table.dim(1));
  std::unordered_map<std::string, std::vector<double>> hashed;
  mesh::EmbeddingLookup lookup = [&](std::string_view token) -> const double* {
    long id = vocab.id(token);
    if (id > kUnkId) {
      return table.values().data() + static_cast<std::ptrdiff_t>(id) * d;
    }
    auto [it, inserted] = hashed.try_emplace(std::string(token));
    if (inserted) {
      SplitMix64 rng(fnv1a64(token) ^ seed);
      it->second.resize(static_cast<std::size_t>(d));
      for (double& x : it->second) {
        x = -0.05 + 0.1 * rng.next_double01();
      }
    }
    return it->second.data();
  };
  return mesh::init_label_embeddings(mesh_vocab, lookup, d);
}

}  // namespace meshidx::model
