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

#include "meshidx/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace meshidx::nn {

namespace {

constexpr const char* kFormat = "meshidx.ckpt";
constexpr int kVersion = 1;

}  // namespace

const Tensor& Checkpoint::find(std::string_view name) const {
  for (const CheckpointEntry& e : entries) {
    if (e.name == name) {
      return e.tensor;
    }
  }
  throw std::runtime_error("checkpoint has no tensor named '" +
                           std::string(name) + "'");
}

void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<CheckpointEntry>& entries,
                     const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["scalar"] = "float64";
  header["byte_order"] = "little-endian";
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (const CheckpointEntry& e : entries) {
    tensors.push_back({{"name", e.name},
                       {"shape", e.tensor.shape()},
                       {"trainable", e.trainable}});
  }
  header["tensors"] = std::move(tensors);
  header["meta"] = meta;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open checkpoint for writing: " +
                             path.string());
  }
  out << header.dump() << '\n';
  for (const CheckpointEntry& e : entries) {
    const auto& values = e.tensor.values();
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("error writing checkpoint: " + path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path.string());
  }
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error("checkpoint is empty: " + path.string());
  }
  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(header_line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("checkpoint header is not valid JSON: " +
                             std::string(e.what()));
  }
  if (header.value("format", "") != kFormat ||
      header.value("version", 0) != kVersion) {
    throw std::runtime_error("unsupported checkpoint format in " + path.string());
  }

  Checkpoint ckpt;
  ckpt.meta = header.value("meta", nlohmann::ordered_json::object());
  for (const auto& t : header.at("tensors")) {
    CheckpointEntry entry;
    entry.name = t.at("name").get<std::string>();
    entry.trainable = t.value("trainable", true);
    std::vector<Index> shape = t.at("shape").get<std::vector<Index>>();
    Index n = shape_size(shape);
    std::vector<double> data(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (in.gcount() !=
        static_cast<std::streamsize>(data.size() * sizeof(double))) {
      throw std::runtime_error("checkpoint payload truncated: " + path.string());
    }
    entry.tensor = Tensor::from_data(std::move(shape), std::move(data),
                                     entry.trainable);
    ckpt.entries.push_back(std::move(entry));
  }
  return ckpt;
}

}  // namespace meshidx::nn
