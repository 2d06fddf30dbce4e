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

#ifndef MESHIDX_EVAL_METRICS_HPP
#define MESHIDX_EVAL_METRICS_HPP

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace meshidx::eval {

/// Per-document label sets as sorted, duplicate-free ordinal vectors.
using LabelSets = std::vector<std::vector<std::int64_t>>;
/// Per-document dense score vectors, all of length L.
using ScoreMatrix = std::vector<std::vector<double>>;

inline constexpr std::array<int, 5> kDefaultKs = {1, 3, 5, 10, 15};

struct ExampleBased {
  double precision = 0.0;  // EBP
  double recall = 0.0;     // EBR
  double f = 0.0;          // EBF
};

/// Per-document precision and recall averaged over documents, combined by a
/// harmonic mean. Documents with empty predictions contribute precision 0;
/// documents with empty gold sets are skipped for recall.
ExampleBased example_based(const LabelSets& gold, const LabelSets& predicted);

struct LabelBased {
  double micro_precision = 0.0;  // MiP
  double micro_recall = 0.0;     // MiR
  double micro_f = 0.0;          // MiF
  double macro_precision = 0.0;  // MaP
  double macro_recall = 0.0;     // MaR
  double macro_f = 0.0;          // MaF
  std::int64_t macro_excluded_labels = 0;  // labels with TP=FP=FN=0
};

/// Micro metrics aggregate global TP/FP/FN counts; macro metrics average
/// per-label precision and recall over labels that appear in gold or
/// predictions (TP=FP=FN=0 labels are excluded and counted).
LabelBased label_based(const LabelSets& gold, const LabelSets& predicted,
                       std::int64_t label_count);

/// Micro-F alone; shared by threshold tuning and early stopping.
double micro_f(const LabelSets& gold, const LabelSets& predicted,
               std::int64_t label_count);

struct RankedMetrics {
  std::vector<int> ks;
  std::vector<double> precision_at;  // aligned with ks
  std::vector<double> recall_at;
};

/// Top-k hit rates from raw scores; ties break toward the lower ordinal.
/// Documents with empty gold sets contribute zero hits to P@k and are
/// skipped for R@k.
RankedMetrics ranked(const LabelSets& gold, const ScoreMatrix& scores,
                     std::span<const int> ks = kDefaultKs);

/// Indices of the top-k scores, ordered by descending score with ascending-
/// ordinal tie-break.
std::vector<std::int64_t> top_k_indices(std::span<const double> scores, int k);

struct MetricsReport {
  ExampleBased example;
  LabelBased label;
  RankedMetrics ranking;

  nlohmann::ordered_json to_json() const;
};

MetricsReport full_report(const LabelSets& gold, const LabelSets& predicted,
                          const ScoreMatrix& scores, std::int64_t label_count,
                          std::span<const int> ks = kDefaultKs);

}  // namespace meshidx::eval

#endif  // MESHIDX_EVAL_METRICS_HPP
