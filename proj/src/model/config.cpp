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

#include "meshidx/model/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "meshidx/util.hpp"

namespace meshidx::model {

namespace {

long parse_long(std::string_view key, std::string_view value) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': expected an integer, got '" +
                                std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    double out = std::stod(std::string(value), &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': expected a real, got '" +
                                std::string(value) + "'");
  }
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view value,
                          T (*one)(std::string_view, std::string_view)) {
  std::vector<T> out;
  std::size_t begin = 0;
  while (begin <= value.size()) {
    std::size_t comma = value.find(',', begin);
    if (comma == std::string_view::npos) {
      comma = value.size();
    }
    std::string_view item = value.substr(begin, comma - begin);
    if (!item.empty()) {
      out.push_back(one(key, item));
    }
    begin = comma + 1;
    if (begin > value.size()) {
      break;
    }
  }
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  return static_cast<int>(parse_long(key, value));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

long ModelConfig::receptive_shrinkage() const {
  long shrink = 0;
  for (long d : dilations) {
    shrink += (kernel_width - 1) * d;
  }
  return shrink;
}

void ModelConfig::validate() const {
  if (embedding_dim <= 0) {
    throw std::invalid_argument("embedding_dim must be positive");
  }
  if (kernel_width <= 0) {
    throw std::invalid_argument("kernel_width must be positive");
  }
  if (dilations.empty()) {
    throw std::invalid_argument("at least one dilation rate is required");
  }
  for (long d : dilations) {
    if (d <= 0) {
      throw std::invalid_argument("dilation rates must be strictly positive");
    }
  }
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw std::invalid_argument("dropout_rate must be in [0, 1)");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("batch_size must be at least 1");
  }
  if (epochs < 1) {
    throw std::invalid_argument("epochs must be at least 1");
  }
  if (active_channels.empty()) {
    throw std::invalid_argument("at least one active channel is required");
  }
  for (int c : active_channels) {
    if (c < 0 || c >= kNumChannels) {
      throw std::invalid_argument("active channel index out of range");
    }
  }
  const long shrink = receptive_shrinkage();
  for (int c : active_channels) {
    if (channel_lengths[static_cast<std::size_t>(c)] <= shrink) {
      throw std::invalid_argument(
          "channel length " +
          std::to_string(channel_lengths[static_cast<std::size_t>(c)]) +
          " does not cover the receptive field (" + std::to_string(shrink + 1) +
          ")");
    }
  }
}

void ModelConfig::apply_line(std::string_view key, std::string_view value) {
  if (key == "embedding_dim") {
    embedding_dim = parse_long(key, value);
  } else if (key == "kernel_width") {
    kernel_width = parse_long(key, value);
  } else if (key == "dilations") {
    dilations = parse_list<long>(key, value, parse_long);
  } else if (key == "conv_channels") {
    conv_channels = parse_long(key, value);
  } else if (key == "channel_lengths") {
    auto lengths = parse_list<long>(key, value, parse_long);
    if (lengths.size() != kNumChannels) {
      throw std::invalid_argument("channel_lengths needs 5 entries");
    }
    std::copy(lengths.begin(), lengths.end(), channel_lengths.begin());
  } else if (key == "active_channels") {
    active_channels = parse_list<int>(key, value, parse_int);
  } else if (key == "dropout_rate") {
    dropout_rate = parse_double(key, value);
  } else if (key == "learning_rate") {
    learning_rate = parse_double(key, value);
  } else if (key == "lr_decay") {
    lr_decay = parse_double(key, value);
  } else if (key == "batch_size") {
    batch_size = parse_long(key, value);
  } else if (key == "epochs") {
    epochs = parse_long(key, value);
  } else if (key == "patience") {
    patience = parse_long(key, value);
  } else if (key == "min_token_freq") {
    min_token_freq = parse_long(key, value);
  } else if (key == "normalized_adjacency") {
    normalized_adjacency = value == "true" || value == "1";
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_long(key, value));
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

ModelConfig ModelConfig::from_file(const std::filesystem::path& path) {
  ModelConfig config;
  std::istringstream in(read_file(path));
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    config.apply_line(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

nlohmann::ordered_json ModelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["embedding_dim"] = embedding_dim;
  j["kernel_width"] = kernel_width;
  j["dilations"] = dilations;
  j["conv_channels"] = conv_channels;
  j["channel_lengths"] = channel_lengths;
  j["active_channels"] = active_channels;
  j["dropout_rate"] = dropout_rate;
  j["learning_rate"] = learning_rate;
  j["lr_decay"] = lr_decay;
  j["batch_size"] = batch_size;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["min_token_freq"] = min_token_freq;
  j["normalized_adjacency"] = normalized_adjacency;
  j["seed"] = seed;
  return j;
}

ModelConfig ModelConfig::from_json(const nlohmann::ordered_json& j) {
  ModelConfig c;
  c.embedding_dim = j.at("embedding_dim").get<long>();
  c.kernel_width = j.at("kernel_width").get<long>();
  c.dilations = j.at("dilations").get<std::vector<long>>();
  c.conv_channels = j.at("conv_channels").get<long>();
  auto lengths = j.at("channel_lengths").get<std::vector<long>>();
  if (lengths.size() != kNumChannels) {
    throw std::invalid_argument("channel_lengths needs 5 entries");
  }
  std::copy(lengths.begin(), lengths.end(), c.channel_lengths.begin());
  c.active_channels = j.at("active_channels").get<std::vector<int>>();
  c.dropout_rate = j.at("dropout_rate").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.lr_decay = j.at("lr_decay").get<double>();
  c.batch_size = j.at("batch_size").get<long>();
  c.epochs = j.at("epochs").get<long>();
  c.patience = j.at("patience").get<long>();
  c.min_token_freq = j.at("min_token_freq").get<long>();
  c.normalized_adjacency = j.at("normalized_adjacency").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::string ModelConfig::canonical_string() const { return to_json().dump(); }

}  // namespace meshidx::model
