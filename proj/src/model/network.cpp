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

#include "meshidx/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "meshidx/nn/ops.hpp"
#include "meshidx/util.hpp"

namespace meshidx::model {

namespace {

constexpr double kMaskedLogit = -1e30;

nn::Tensor glorot_uniform(std::vector<nn::Index> shape, nn::Index fan_in,
                          nn::Index fan_out, std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return nn::Tensor::uniform(std::move(shape), -limit, limit, rng,
                             /*requires_grad=*/true);
}

}  // namespace

nn::Tensor initial_embedding_table(const ModelConfig& config,
                                   nn::Index vocab_size, std::mt19937_64& rng) {
  nn::Tensor table =
      nn::Tensor::uniform({vocab_size, config.embedding_dim}, -0.05, 0.05, rng,
                          /*requires_grad=*/true);
  for (nn::Index j = 0; j < config.embedding_dim; ++j) {
    table.values()[static_cast<std::size_t>(j)] = 0.0;  // <pad> row
  }
  return table;
}

ModelParams ModelParams::init(const ModelConfig& config, nn::Index vocab_size,
                              nn::Index label_count, std::mt19937_64& rng) {
  config.validate();
  const nn::Index d = config.embedding_dim;
  const nn::Index cw = config.conv_width();
  const nn::Index s = config.kernel_width;

  ModelParams params;
  params.embedding = initial_embedding_table(config, vocab_size, rng);
  for (int c = 0; c < kNumChannels; ++c) {
    ChannelParams& channel = params.channels[static_cast<std::size_t>(c)];
    nn::Index in_width = d;
    for (std::size_t layer = 0; layer < config.dilations.size(); ++layer) {
      channel.conv_kernels.push_back(
          glorot_uniform({s, in_width, cw}, s * in_width, s * cw, rng));
      in_width = cw;
    }
    channel.projection = glorot_uniform({cw, d}, cw, d, rng);
  }
  params.gcn_w0 = glorot_uniform({d, d}, d, d, rng);
  params.gcn_w1 = glorot_uniform({d, d}, d, d, rng);
  params.score_bias = nn::Tensor::zeros({label_count}, /*requires_grad=*/true);
  return params;
}

std::vector<nn::Tensor> ModelParams::trainable() const {
  std::vector<nn::Tensor> out;
  for (const auto& [_, tensor] : named()) {
    out.push_back(tensor);
  }
  return out;
}

std::vector<std::pair<std::string, nn::Tensor>> ModelParams::named() const {
  std::vector<std::pair<std::string, nn::Tensor>> out;
  out.emplace_back("embedding", embedding);
  for (int c = 0; c < kNumChannels; ++c) {
    const ChannelParams& channel = channels[static_cast<std::size_t>(c)];
    std::string prefix = "channel." + std::string(kChannelNames[static_cast<std::size_t>(c)]);
    for (std::size_t layer = 0; layer < channel.conv_kernels.size(); ++layer) {
      out.emplace_back(prefix + ".conv" + std::to_string(layer),
                       channel.conv_kernels[layer]);
    }
    out.emplace_back(prefix + ".projection", channel.projection);
  }
  out.emplace_back("gcn.w0", gcn_w0);
  out.emplace_back("gcn.w1", gcn_w1);
  out.emplace_back("score_bias", score_bias);
  return out;
}

ModelParams ModelParams::clone() const {
  ModelParams out;
  out.embedding = embedding.detached_copy();
  for (int c = 0; c < kNumChannels; ++c) {
    const ChannelParams& src = channels[static_cast<std::size_t>(c)];
    ChannelParams& dst = out.channels[static_cast<std::size_t>(c)];
    for (const nn::Tensor& k : src.conv_kernels) {
      dst.conv_kernels.push_back(k.detached_copy());
    }
    dst.projection = src.projection.detached_copy();
  }
  out.gcn_w0 = gcn_w0.detached_copy();
  out.gcn_w1 = gcn_w1.detached_copy();
  out.score_bias = score_bias.detached_copy();
  return out;
}

ChannelFeatures encode_channel(std::span<const nn::Index> ids,
                               nn::Index real_length, const ModelParams& params,
                               const ModelConfig& config, int channel,
                               bool training, std::uint64_t dropout_seed) {
  if (ids.empty() || real_length < 1) {
    throw std::invalid_argument("encode_channel: empty sequence");
  }
  const ChannelParams& cp = params.channels.at(static_cast<std::size_t>(channel));

  nn::Tensor x = nn::embedding_lookup(ids, params.embedding);
  x = nn::dropout(x, config.dropout_rate, dropout_seed, training);
  for (std::size_t layer = 0; layer < config.dilations.size(); ++layer) {
    x = nn::dilated_conv1d(x, cp.conv_kernels[layer], config.dilations[layer]);
    x = nn::relu(x);
  }
  nn::Tensor features = nn::matmul(x, cp.projection);

  const nn::Index positions = features.dim(0);
  const nn::Index shrink = config.receptive_shrinkage();
  // Positions whose window starts inside the real (unpadded) prefix and fits
  // before padding are valid; keep at least one so attention stays defined.
  const nn::Index valid =
      std::clamp<nn::Index>(real_length - shrink, 1, positions);
  ChannelFeatures out;
  out.features = std::move(features);
  out.mask.assign(static_cast<std::size_t>(positions), 0.0);
  for (nn::Index t = 0; t < valid; ++t) {
    out.mask[static_cast<std::size_t>(t)] = 1.0;
  }
  return out;
}

nn::Tensor label_features(const nn::Tensor& label_init,
                          const nn::Tensor& adjacency, const ModelParams& params,
                          Activation activation) {
  auto act = [&](const nn::Tensor& t) {
    return activation == Activation::kRelu ? nn::relu(t) : t;
  };
  nn::Tensor h1 = act(nn::matmul(nn::matmul(adjacency, label_init), params.gcn_w0));
  nn::Tensor h2 = act(nn::matmul(nn::matmul(adjacency, h1), params.gcn_w1));
  return nn::add(label_init, h2);
}

nn::Tensor attend(const ChannelFeatures& channel, const nn::Tensor& h_label) {
  const nn::Index positions = channel.features.dim(0);
  if (positions < 1) {
    throw std::invalid_argument("attend: no positions");
  }
  const nn::Index label_count = h_label.dim(0);

  nn::Tensor logits = nn::matmul(channel.features, nn::transpose(h_label));
  bool any_masked = false;
  for (double m : channel.mask) {
    any_masked = any_masked || m == 0.0;
  }
  if (any_masked) {
    nn::Tensor mask = nn::Tensor::zeros({positions, label_count});
    auto& mv = mask.values();
    for (nn::Index t = 0; t < positions; ++t) {
      if (channel.mask[static_cast<std::size_t>(t)] == 0.0) {
        for (nn::Index l = 0; l < label_count; ++l) {
          mv[static_cast<std::size_t>(t * label_count + l)] = kMaskedLogit;
        }
      }
    }
    logits = nn::add(logits, mask);
  }
  nn::Tensor alpha = nn::softmax(logits, /*axis=*/0);
  return nn::matmul(nn::transpose(alpha), channel.features);
}

nn::Tensor fuse_and_score(const std::vector<nn::Tensor>& contents,
                          const nn::Tensor& h_label, const nn::Tensor& bias) {
  if (contents.empty()) {
    throw std::invalid_argument("fuse_and_score: no channel contents");
  }
  nn::Tensor fused = contents[0];
  for (std::size_t i = 1; i < contents.size(); ++i) {
    fused = nn::add(fused, contents[i]);
  }
  return nn::sigmoid(nn::add(nn::row_sum(nn::mul(fused, h_label)), bias));
}

nn::Tensor score_with_labels(const TokenizedDoc& doc, const ModelParams& params,
                             const nn::Tensor& h_label, const ModelConfig& config,
                             bool training, std::uint64_t dropout_seed) {
  std::vector<nn::Tensor> contents;
  contents.reserve(config.active_channels.size());
  for (int channel : config.active_channels) {
    ChannelFeatures features = encode_channel(
        doc.channel_ids[static_cast<std::size_t>(channel)],
        doc.real_lengths[static_cast<std::size_t>(channel)], params, config,
        channel, training,
        mix_seed(dropout_seed, static_cast<std::uint64_t>(channel)));
    contents.push_back(attend(features, h_label));
  }
  return fuse_and_score(contents, h_label, params.score_bias);
}

nn::Tensor forward(const TokenizedDoc& doc, const ModelParams& params,
                   const nn::Tensor& adjacency, const nn::Tensor& label_init,
                   const ModelConfig& config, bool training,
                   std::uint64_t dropout_seed) {
  nn::Tensor h_label = label_features(label_init, adjacency, params);
  return score_with_labels(doc, params, h_label, config, training, dropout_seed);
}

nn::Tensor doc_loss(const nn::Tensor& scores, std::span<const nn::Index> labels) {
  return nn::bce_loss(scores, target_vector(labels, scores.dim(0)));
}

}  // namespace meshidx::model
