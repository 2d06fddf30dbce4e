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

#include "meshidx/model/trainer.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

#include "meshidx/eval/metrics.hpp"
#include "meshidx/eval/thresholds.hpp"
#include "meshidx/nn/adam.hpp"
#include "meshidx/nn/ops.hpp"
#include "meshidx/util.hpp"

namespace meshidx::model {

namespace {

double validation_micro_f(std::span<const TokenizedDoc> docs,
                          const ModelParams& params, const nn::Tensor& adjacency,
                          const nn::Tensor& label_init, const ModelConfig& config) {
  std::vector<std::vector<double>> scores =
      predict(docs, params, adjacency, label_init, config);
  const std::vector<double> tau(
      static_cast<std::size_t>(label_init.dim(0)), 0.5);
  eval::LabelSets gold;
  gold.reserve(docs.size());
  for (const TokenizedDoc& doc : docs) {
    gold.emplace_back(doc.labels.begin(), doc.labels.end());
  }
  return eval::micro_f(gold, eval::apply_thresholds(scores, tau),
                       label_init.dim(0));
}

}  // namespace

TrainResult train(std::span<const TokenizedDoc> train_docs,
                  std::span<const TokenizedDoc> val_docs, nn::Index vocab_size,
                  const nn::Tensor& adjacency, const nn::Tensor& label_init,
                  const ModelConfig& config,
                  const nn::Tensor* pretrained_embeddings) {
  config.validate();
  if (train_docs.empty()) {
    throw std::invalid_argument("train: empty training set");
  }
  const nn::Index label_count = label_init.dim(0);
  for (const TokenizedDoc& doc : train_docs) {
    for (nn::Index l : doc.labels) {
      if (l < 0 || l >= label_count) {
        throw std::out_of_range("train: document " + doc.pmid +
                                " has label ordinal " + std::to_string(l) +
                                " outside [0, " + std::to_string(label_count) +
                                ")");
      }
    }
  }

  std::mt19937_64 rng(config.seed);
  ModelParams params = ModelParams::init(config, vocab_size, label_count, rng);
  if (pretrained_embeddings != nullptr) {
    if (pretrained_embeddings->shape() != params.embedding.shape()) {
      throw std::invalid_argument(
          "train: pretrained embedding table shape mismatch");
    }
    params.embedding.values() = pretrained_embeddings->values();
  }
  nn::AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  adam.lr_decay = config.lr_decay;
  nn::AdamOptimizer optimizer(params.trainable(), adam);

  TrainResult result;
  ModelParams best_params = params.clone();
  long stale_epochs = 0;

  std::vector<std::size_t> order(train_docs.size());
  std::iota(order.begin(), order.end(), 0);

  for (long epoch = 0; epoch < config.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      optimizer.zero_grad();
      nn::Tensor h_label = label_features(label_init, adjacency, params);
      nn::Tensor batch_loss;
      for (std::size_t i = start; i < stop; ++i) {
        const TokenizedDoc& doc = train_docs[order[i]];
        nn::Tensor scores = score_with_labels(
            doc, params, h_label, config, /*training=*/true,
            mix_seed(config.seed, static_cast<std::uint64_t>(epoch),
                     static_cast<std::uint64_t>(i)));
        nn::Tensor loss = doc_loss(scores, doc.labels);
        loss_sum += loss.item();
        batch_loss = batch_loss.defined() ? nn::add(batch_loss, loss) : loss;
      }
      batch_loss =
          nn::scale(batch_loss, 1.0 / static_cast<double>(stop - start));
      batch_loss.backward();
      optimizer.step();
    }
    result.loss_trace.push_back(loss_sum /
                                static_cast<double>(train_docs.size()));
    optimizer.decay_lr();
    result.epochs_run = epoch + 1;

    if (!val_docs.empty()) {
      double val_mif =
          validation_micro_f(val_docs, params, adjacency, label_init, config);
      if (val_mif > result.best_val_micro_f) {
        result.best_val_micro_f = val_mif;
        result.best_epoch = epoch;
        best_params = params.clone();
        stale_epochs = 0;
      } else {
        ++stale_epochs;
        if (stale_epochs >= config.patience) {
          break;
        }
      }
    }
  }

  result.params = val_docs.empty() ? std::move(params) : std::move(best_params);
  return result;
}

std::vector<std::vector<double>> predict(std::span<const TokenizedDoc> docs,
                                         const ModelParams& params,
                                         const nn::Tensor& adjacency,
                                         const nn::Tensor& label_init,
                                         const ModelConfig& config) {
  nn::Tensor h_label = label_features(label_init, adjacency, params);
  std::vector<std::vector<double>> out;
  out.reserve(docs.size());
  for (const TokenizedDoc& doc : docs) {
    nn::Tensor scores = score_with_labels(doc, params, h_label, config,
                                          /*training=*/false, /*seed=*/0);
    out.push_back(scores.values());
  }
  return out;
}

}  // namespace meshidx::model
