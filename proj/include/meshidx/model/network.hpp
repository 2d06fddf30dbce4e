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

#ifndef MESHIDX_MODEL_NETWORK_HPP
#define MESHIDX_MODEL_NETWORK_HPP

#include <array>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meshidx/model/config.hpp"
#include "meshidx/model/text_pipeline.hpp"
#include "meshidx/nn/tensor.hpp"

namespace meshidx::model {

struct ChannelParams {
  std::vector<nn::Tensor> conv_kernels;  // one [s x c_in x c_out] per dilation
  nn::Tensor projection;                 // [conv_width x d]
};

/// Every trainable value: the word-embedding table, per-channel stacked
/// dilated conv kernels plus the width-restoring projection, the two GCN
/// weight matrices, and the per-label score bias.
/// Fresh word-embedding table: uniform(-0.05, 0.05) with a zeroed <pad> row.
/// ModelParams::init draws this first, so callers seeding an identical rng
/// reproduce the exact table (the label-embedding fallback relies on this).
nn::Tensor initial_embedding_table(const ModelConfig& config,
                                   nn::Index vocab_size, std::mt19937_64& rng);

struct ModelParams {
  nn::Tensor embedding;  // [V x d], row 0 is <pad>
  std::array<ChannelParams, kNumChannels> channels;
  nn::Tensor gcn_w0;     // [d x d]
  nn::Tensor gcn_w1;     // [d x d]
  nn::Tensor score_bias; // [L]

  static ModelParams init(const ModelConfig& config, nn::Index vocab_size,
                          nn::Index label_count, std::mt19937_64& rng);

  std::vector<nn::Tensor> trainable() const;
  std::vector<std::pair<std::string, nn::Tensor>> named() const;
  ModelParams clone() const;
};

enum class Activation { kRelu, kIdentity };

/// Conv features of one channel plus the position-validity mask (1 valid,
/// 0 padding-only); masked positions are excluded from attention.
struct ChannelFeatures {
  nn::Tensor features;  // [positions x d]
  std::vector<double> mask;
};

/// Embedding lookup, dropout, the stacked dilated convolutions with ReLU,
/// then the linear projection back to width d.
ChannelFeatures encode_channel(std::span<const nn::Index> ids,
                               nn::Index real_length, const ModelParams& params,
                               const ModelConfig& config, int channel,
                               bool training, std::uint64_t dropout_seed);

/// Two propagation layers over the label graph followed by the residual sum
/// with the initial label matrix. `activation` defaults to ReLU; the
/// identity hook exists for closed-form tests.
nn::Tensor label_features(const nn::Tensor& label_init,
                          const nn::Tensor& adjacency, const ModelParams& params,
                          Activation activation = Activation::kRelu);

/// Label-wise attention: softmax over positions of D_C * H^T, then
/// content_C = alpha^T * D_C. Masked positions get -inf logits.
nn::Tensor attend(const ChannelFeatures& channel, const nn::Tensor& h_label);

/// Sums the per-channel contents and scores each label through a per-label
/// dot product with H plus bias, squashed by a sigmoid.
nn::Tensor fuse_and_score(const std::vector<nn::Tensor>& contents,
                          const nn::Tensor& h_label, const nn::Tensor& bias);

/// Per-document scores given precomputed label features (batch path).
nn::Tensor score_with_labels(const TokenizedDoc& doc, const ModelParams& params,
                             const nn::Tensor& h_label, const ModelConfig& config,
                             bool training, std::uint64_t dropout_seed);

/// Full composition: encode every active channel, build label features,
/// attend, fuse and score.
nn::Tensor forward(const TokenizedDoc& doc, const ModelParams& params,
                   const nn::Tensor& adjacency, const nn::Tensor& label_init,
                   const ModelConfig& config, bool training,
                   std::uint64_t dropout_seed);

/// Summed binary cross-entropy of one document's scores against its gold set.
nn::Tensor doc_loss(const nn::Tensor& scores, std::span<const nn::Index> labels);

}  // namespace meshidx::model

#endif  // MESHIDX_MODEL_NETWORK_HPP
