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

#ifndef MESHIDX_CLI_COMMANDS_HPP
#define MESHIDX_CLI_COMMANDS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "meshidx/model/config.hpp"

namespace meshidx::cli {

/// Relative output paths are redirected into $MESHIDX_OUTPUT_DIR when set.
std::filesystem::path resolve_output(const std::filesystem::path& path);

struct BuildCorpusArgs {
  std::filesystem::path bioc_dir;
  std::filesystem::path medline_dir;
  std::filesystem::path out;
  int workers = 1;
  std::size_t spill_threshold = 500000;
  std::uint64_t seed = 0;
};
void cmd_build_corpus(const BuildCorpusArgs& args);

struct StatsArgs {
  std::filesystem::path records;
  std::filesystem::path out;
};
void cmd_stats(const StatsArgs& args);

struct SplitArgs {
  std::filesystem::path records;
  std::filesystem::path out_dir;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};
  std::uint64_t seed = 0;
  bool complete_only = false;
};
void cmd_split(const SplitArgs& args);

struct TrainArgs {
  std::filesystem::path records;
  std::filesystem::path mesh_tsv;
  std::optional<std::filesystem::path> embeddings;
  std::filesystem::path train_pmids;
  std::optional<std::filesystem::path> val_pmids;
  std::filesystem::path out_checkpoint;
  std::optional<std::filesystem::path> loss_trace_out;
  model::ModelConfig config;
};
void cmd_train(const TrainArgs& args);

struct PredictArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path records;
  std::filesystem::path mesh_tsv;
  std::filesystem::path out;
  std::optional<std::filesystem::path> scores_out;
  int top_k = 15;
};
void cmd_predict(const PredictArgs& args);

struct TuneArgs {
  std::filesystem::path scores;
  std::filesystem::path gold;
  std::filesystem::path mesh_tsv;
  std::filesystem::path out;
  int max_sweeps = 5;
};
void cmd_tune_thresholds(const TuneArgs& args);

struct EvaluateArgs {
  std::optional<std::filesystem::path> scores;
  std::optional<std::filesystem::path> preds;
  std::filesystem::path gold;
  std::filesystem::path mesh_tsv;
  std::optional<std::filesystem::path> thresholds;
  std::filesystem::path out;
  std::vector<int> ks = {1, 3, 5, 10, 15};
};
void cmd_evaluate(const EvaluateArgs& args);

}  // namespace meshidx::cli

#endif  // MESHIDX_CLI_COMMANDS_HPP
