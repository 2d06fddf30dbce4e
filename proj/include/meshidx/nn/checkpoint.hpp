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

#ifndef MESHIDX_NN_CHECKPOINT_HPP
#define MESHIDX_NN_CHECKPOINT_HPP

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "meshidx/nn/tensor.hpp"

namespace meshidx::nn {

/// Checkpoint file layout (version 1):
///   line 1: a JSON header `{"format":"meshidx.ckpt","version":1,
///           "scalar":"float64","byte_order":"little-endian",
///           "tensors":[{"name":...,"shape":[...],"trainable":bool},...],
///           "meta":{...}}` terminated by '\n';
///   then the concatenated row-major float64 payloads of the tensors, in
///   header order.
struct CheckpointEntry {
  std::string name;
  Tensor tensor;
  bool trainable = true;
};

struct Checkpoint {
  std::vector<CheckpointEntry> entries;
  nlohmann::ordered_json meta;

  /// Throws std::runtime_error when the name is missing.
  const Tensor& find(std::string_view name) const;
};

void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<CheckpointEntry>& entries,
                     const nlohmann::ordered_json& meta);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace meshidx::nn

#endif  // MESHIDX_NN_CHECKPOINT_HPP
