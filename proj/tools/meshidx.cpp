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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "meshidx/cli/commands.hpp"
#include "meshidx/model/config.hpp"

namespace {

using meshidx::cli::BuildCorpusArgs;
using meshidx::cli::EvaluateArgs;
using meshidx::cli::PredictArgs;
using meshidx::cli::SplitArgs;
using meshidx::cli::StatsArgs;
using meshidx::cli::TrainArgs;
using meshidx::cli::TuneArgs;
using meshidx::model::ModelConfig;

/// Training settings resolved as flags > config file > defaults.
struct TrainFlags {
  std::string config_file;
  std::optional<long> embedding_dim;
  std::optional<long> kernel_width;
  std::optional<std::vector<long>> dilations;
  std::optional<long> conv_channels;
  std::optional<std::vector<long>> channel_lengths;
  std::optional<std::vector<int>> active_channels;
  std::optional<double> dropout_rate;
  std::optional<double> learning_rate;
  std::optional<double> lr_decay;
  std::optional<long> batch_size;
  std::optional<long> epochs;
  std::optional<long> patience;
  std::optional<long> min_token_freq;
  std::optional<bool> normalized_adjacency;
  std::optional<std::uint64_t> seed;

  ModelConfig resolve() const {
    ModelConfig config;
    if (!config_file.empty()) {
      config = ModelConfig::from_file(config_file);
    }
    auto set = [](auto& target, const auto& source) {
      if (source) {
        target = *source;
      }
    };
    set(config.embedding_dim, embedding_dim);
    set(config.kernel_width, kernel_width);
    set(config.dilations, dilations);
    set(config.conv_channels, conv_channels);
    if (channel_lengths) {
      if (channel_lengths->size() != meshidx::model::kNumChannels) {
        throw CLI::ValidationError("--channel-lengths needs 5 entries");
      }
      std::copy(channel_lengths->begin(), channel_lengths->end(),
                config.channel_lengths.begin());
    }
    set(config.active_channels, active_channels);
    set(config.dropout_rate, dropout_rate);
    set(config.learning_rate, learning_rate);
    set(config.lr_decay, lr_decay);
    set(config.batch_size, batch_size);
    set(config.epochs, epochs);
    set(config.patience, patience);
    set(config.min_token_freq, min_token_freq);
    set(config.normalized_adjacency, normalized_adjacency);
    set(config.seed, seed);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-text MeSH corpus construction, indexing model and "
               "evaluation toolkit"};
  app.require_subcommand(1);

  BuildCorpusArgs build_args;
  CLI::App* build = app.add_subcommand(
      "build-corpus", "Parse, filter and join the two XML corpora");
  build->add_option("--bioc-dir", build_args.bioc_dir, "Directory of BioC XML files")
      ->required();
  build->add_option("--medline-dir", build_args.medline_dir,
                    "Directory of MEDLINE baseline XML files (gzip accepted)")
      ->required();
  build->add_option("--out", build_args.out, "Output record file (JSON lines)")
      ->required();
  build->add_option("--workers", build_args.workers, "Parser worker threads");
  build->add_option("--spill-threshold", build_args.spill_threshold,
                    "Max in-memory full-text records before spilling to disk");
  build->add_option("--seed", build_args.seed, "Seed recorded in the manifest");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Per-section corpus statistics");
  stats->add_option("--records", stats_args.records, "Record file")->required();
  stats->add_option("--out", stats_args.out, "Output stats JSON")->required();

  SplitArgs split_args;
  std::vector<double> ratios = {0.8, 0.1, 0.1};
  CLI::App* split = app.add_subcommand(
      "split", "Year-stratified train/validation/test split");
  split->add_option("--records", split_args.records, "Record file")->required();
  split->add_option("--out-dir", split_args.out_dir, "Directory for PMID lists")
      ->required();
  split->add_option("--ratios", ratios, "Train/val/test ratios")->expected(3);
  split->add_option("--seed", split_args.seed, "Shuffle seed");
  split->add_flag("--complete-only", split_args.complete_only,
                  "Keep only records with all six text sections");

  TrainArgs train_args;
  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train the indexing model");
  train->add_option("--records", train_args.records, "Record file")->required();
  train->add_option("--mesh-tsv", train_args.mesh_tsv, "Descriptor TSV")
      ->required();
  train->add_option("--train-pmids", train_args.train_pmids, "Training PMID list")
      ->required();
  std::string val_pmids;
  train->add_option("--val-pmids", val_pmids, "Validation PMID list");
  std::string embeddings;
  train->add_option("--embeddings", embeddings,
                    "Pretrained word-embedding text file");
  train->add_option("--out", train_args.out_checkpoint, "Output checkpoint")
      ->required();
  std::string loss_trace;
  train->add_option("--loss-trace", loss_trace, "Optional loss-trace JSON");
  train->add_option("--config", train_flags.config_file,
                    "key=value config file (flags override it)");
  train->add_option("--embedding-dim", train_flags.embedding_dim, "d");
  train->add_option("--kernel-width", train_flags.kernel_width, "s");
  train->add_option("--dilations", train_flags.dilations, "Dilation rates");
  train->add_option("--conv-channels", train_flags.conv_channels,
                    "Conv width (0 = 2*d)");
  train->add_option("--channel-lengths", train_flags.channel_lengths,
                    "Max tokens per channel (5 values)");
  train->add_option("--active-channels", train_flags.active_channels,
                    "Channel subset, e.g. 0 for title+abstract only");
  train->add_option("--dropout", train_flags.dropout_rate, "Dropout rate");
  train->add_option("--lr", train_flags.learning_rate, "Initial learning rate");
  train->add_option("--lr-decay", train_flags.lr_decay, "Per-epoch decay");
  train->add_option("--batch-size", train_flags.batch_size, "Minibatch size");
  train->add_option("--epochs", train_flags.epochs, "Max epochs");
  train->add_option("--patience", train_flags.patience, "Early-stop patience");
  train->add_option("--min-token-freq", train_flags.min_token_freq,
                    "Vocabulary frequency cut");
  train->add_option("--normalized-adjacency", train_flags.normalized_adjacency,
                    "Use symmetric-normalized adjacency");
  train->add_option("--seed", train_flags.seed, "Training seed");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "Score documents");
  predict->add_option("--checkpoint", predict_args.checkpoint, "Checkpoint")
      ->required();
  predict->add_option("--records", predict_args.records, "Record file")
      ->required();
  predict->add_option("--mesh-tsv", predict_args.mesh_tsv, "Descriptor TSV")
      ->required();
  predict->add_option("--out", predict_args.out, "Top-k predictions (JSON lines)")
      ->required();
  std::string scores_out;
  predict->add_option("--scores-out", scores_out, "Optional full score file");
  predict->add_option("--top-k", predict_args.top_k, "Entries per document");

  TuneArgs tune_args;
  CLI::App* tune = app.add_subcommand("tune-thresholds",
                                      "Micro-F per-label threshold tuning");
  tune->add_option("--scores", tune_args.scores, "Validation score file")
      ->required();
  tune->add_option("--gold", tune_args.gold, "Gold label file")->required();
  tune->add_option("--mesh-tsv", tune_args.mesh_tsv, "Descriptor TSV")
      ->required();
  tune->add_option("--out", tune_args.out, "Output threshold JSON")->required();
  tune->add_option("--max-sweeps", tune_args.max_sweeps, "Coordinate sweeps");

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute the metric report");
  std::string eval_scores;
  std::string eval_preds;
  evaluate->add_option("--scores", eval_scores, "Score file (JSON lines)");
  evaluate->add_option("--preds", eval_preds, "Prediction-set file (JSON lines)");
  evaluate->add_option("--gold", eval_args.gold, "Gold label file")->required();
  evaluate->add_option("--mesh-tsv", eval_args.mesh_tsv, "Descriptor TSV")
      ->required();
  std::string thresholds;
  evaluate->add_option("--thresholds", thresholds,
                       "Threshold JSON (default: uniform 0.5)");
  evaluate->add_option("--out", eval_args.out, "Output report JSON")->required();
  evaluate->add_option("--ks", eval_args.ks, "Ranking cutoffs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      meshidx::cli::cmd_build_corpus(build_args);
    } else if (stats->parsed()) {
      meshidx::cli::cmd_stats(stats_args);
    } else if (split->parsed()) {
      std::copy(ratios.begin(), ratios.end(), split_args.ratios.begin());
      meshidx::cli::cmd_split(split_args);
    } else if (train->parsed()) {
      train_args.config = train_flags.resolve();
      if (!val_pmids.empty()) {
        train_args.val_pmids = val_pmids;
      }
      if (!embeddings.empty()) {
        train_args.embeddings = embeddings;
      }
      if (!loss_trace.empty()) {
        train_args.loss_trace_out = loss_trace;
      }
      meshidx::cli::cmd_train(train_args);
    } else if (predict->parsed()) {
      if (!scores_out.empty()) {
        predict_args.scores_out = scores_out;
      }
      meshidx::cli::cmd_predict(predict_args);
    } else if (tune->parsed()) {
      meshidx::cli::cmd_tune_thresholds(tune_args);
    } else if (evaluate->parsed()) {
      if (!eval_scores.empty()) {
        eval_args.scores = eval_scores;
      }
      if (!eval_preds.empty()) {
        eval_args.preds = eval_preds;
      }
      if (!thresholds.empty()) {
        eval_args.thresholds = thresholds;
      }
      meshidx::cli::cmd_evaluate(eval_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
