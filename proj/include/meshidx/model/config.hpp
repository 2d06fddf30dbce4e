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

#ifndef MESHIDX_MODEL_CONFIG_HPP
#define MESHIDX_MODEL_CONFIG_HPP

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "meshidx/nn/tensor.hpp"

namespace meshidx::model {

inline constexpr int kNumChannels = 5;

/// Channel order: title+abstract, introduction, methods, results, discussion.
inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "title_abstract", "intro", "methods", "results", "discuss",
};

struct ModelConfig {
  long embedding_dim = 200;            // d
  long kernel_width = 3;               // s
  std::vector<long> dilations = {1, 2, 3};
  long conv_channels = 0;              // 0 means 2*d
  std::array<long, kNumChannels> channel_lengths = {64, 256, 512, 512, 512};
  std::vector<int> active_channels = {0, 1, 2, 3, 4};
  double dropout_rate = 0.2;
  double learning_rate = 3e-4;
  double lr_decay = 0.9;
  long batch_size = 8;
  long epochs = 20;
  long patience = 3;
  long min_token_freq = 2;
  bool normalized_adjacency = false;
  std::uint64_t seed = 7;

  long conv_width() const { return conv_channels > 0 ? conv_channels : 2 * embedding_dim; }
  /// Sequence shrinkage of the stacked valid-padding conv layers.
  long receptive_shrinkage() const;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;

  /// Flat `key=value` files; '#' starts a comment. Unknown keys are errors.
  static ModelConfig from_file(const std::filesystem::path& path);
  void apply_line(std::string_view key, std::string_view value);

  nlohmann::ordered_json to_json() const;
  static ModelConfig from_json(const nlohmann::ordered_json& j);

  /// Canonical text form used for config hashing.
  std::string canonical_string() const;
};

}  // namespace meshidx::model

#endif  // MESHIDX_MODEL_CONFIG_HPP
