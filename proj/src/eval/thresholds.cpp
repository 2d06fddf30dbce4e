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

#include "meshidx/eval/thresholds.hpp"

#include <algorithm>
#include <stdexcept>

namespace meshidx::eval {

namespace {

struct LabelColumn {
  std::vector<double> sorted_scores;     // descending
  std::vector<std::int64_t> gold_prefix; // gold hits among the first r scores
  std::int64_t gold_total = 0;
  std::vector<double> candidates;        // ascending

  /// (tp, fp, fn) for this label at threshold tau.
  std::array<std::int64_t, 3> confusion_at(double tau) const {
    auto begin = sorted_scores.begin();
    auto end = sorted_scores.end();
    // Count scores >= tau in the descending list.
    auto it = std::lower_bound(begin, end, tau, std::greater<double>());
    auto predicted = static_cast<std::int64_t>(it - begin);
    std::int64_t tp = gold_prefix[static_cast<std::size_t>(predicted)];
    std::int64_t fp = predicted - tp;
    std::int64_t fn = gold_total - tp;
    return {tp, fp, fn};
  }
};

double mif_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const std::int64_t denom = 2 * tp + fp + fn;
  return denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom)
                   : 0.0;
}

}  // namespace

std::vector<double> threshold_candidates(std::vector<double> label_scores) {
  std::sort(label_scores.begin(), label_scores.end());
  label_scores.erase(std::unique(label_scores.begin(), label_scores.end()),
                     label_scores.end());
  std::vector<double> candidates;
  if (label_scores.empty()) {
    return candidates;
  }
  candidates.reserve(label_scores.size() + 1);
  candidates.push_back(label_scores.front() / 2.0);
  for (std::size_t i = 0; i + 1 < label_scores.size(); ++i) {
    candidates.push_back((label_scores[i] + label_scores[i + 1]) / 2.0);
  }
  candidates.push_back((label_scores.back() + 1.0) / 2.0);
  return candidates;
}

std::vector<double> tune_thresholds(const ScoreMatrix& scores,
                                    const LabelSets& gold, int max_sweeps) {
  if (scores.empty()) {
    throw std::invalid_argument("tune_thresholds: no validation documents");
  }
  if (scores.size() != gold.size()) {
    throw std::invalid_argument("tune_thresholds: score/gold size mismatch");
  }
  const auto label_count = static_cast<std::int64_t>(scores.front().size());
  const auto n = scores.size();

  std::vector<LabelColumn> columns(static_cast<std::size_t>(label_count));
  for (std::int64_t l = 0; l < label_count; ++l) {
    auto& col = columns[static_cast<std::size_t>(l)];
    std::vector<std::pair<double, bool>> entries;
    entries.reserve(n);
    for (std::size_t doc = 0; doc < n; ++doc) {
      if (static_cast<std::int64_t>(scores[doc].size()) != label_count) {
        throw std::invalid_argument("tune_thresholds: ragged score matrix");
      }
      bool is_gold = std::binary_search(gold[doc].begin(), gold[doc].end(), l);
      entries.emplace_back(scores[doc][static_cast<std::size_t>(l)], is_gold);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    col.sorted_scores.reserve(n);
    col.gold_prefix.assign(n + 1, 0);
    std::vector<double> raw;
    raw.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      col.sorted_scores.push_back(entries[r].first);
      raw.push_back(entries[r].first);
      col.gold_prefix[r + 1] =
          col.gold_prefix[r] + (entries[r].second ? 1 : 0);
    }
    col.gold_total = col.gold_prefix[n];
    col.candidates = threshold_candidates(std::move(raw));
  }

  const std::vector<double> uniform(static_cast<std::size_t>(label_count), 0.5);
  auto totals_at = [&](const std::vector<double>& tau) {
    std::array<std::int64_t, 3> totals{0, 0, 0};
    for (std::int64_t l = 0; l < label_count; ++l) {
      auto c = columns[static_cast<std::size_t>(l)].confusion_at(
          tau[static_cast<std::size_t>(l)]);
      totals[0] += c[0];
      totals[1] += c[1];
      totals[2] += c[2];
    }
    return totals;
  };

  std::vector<double> tau = uniform;
  auto totals = totals_at(tau);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::int64_t l = 0; l < label_count; ++l) {
      auto& col = columns[static_cast<std::size_t>(l)];
      auto current = col.confusion_at(tau[static_cast<std::size_t>(l)]);
      const std::int64_t tp_rest = totals[0] - current[0];
      const std::int64_t fp_rest = totals[1] - current[1];
      const std::int64_t fn_rest = totals[2] - current[2];

      // Every achievable bipartition of this label corresponds to one
      // candidate, so selecting strictly from the grid never loses to the
      // incumbent threshold. Candidates ascend; >= keeps the larger tie.
      double best_tau = 0.0;
      std::array<std::int64_t, 3> best_conf{0, 0, 0};
      double best_mif = -1.0;
      for (double candidate : col.candidates) {
        auto c = col.confusion_at(candidate);
        double mif = mif_from_counts(tp_rest + c[0], fp_rest + c[1],
                                     fn_rest + c[2]);
        if (mif >= best_mif) {
          best_mif = mif;
          best_tau = candidate;
          best_conf = c;
        }
      }
      if (best_tau != tau[static_cast<std::size_t>(l)]) {
        tau[static_cast<std::size_t>(l)] = best_tau;
        totals = {tp_rest + best_conf[0], fp_rest + best_conf[1],
                  fn_rest + best_conf[2]};
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
  }

  const auto uniform_totals = totals_at(uniform);
  if (mif_from_counts(totals[0], totals[1], totals[2]) <
      mif_from_counts(uniform_totals[0], uniform_totals[1], uniform_totals[2])) {
    return uniform;
  }
  return tau;
}

LabelSets apply_thresholds(const ScoreMatrix& scores,
                           const std::vector<double>& tau) {
  LabelSets out;
  out.reserve(scores.size());
  for (const auto& row : scores) {
    if (row.size() != tau.size()) {
      throw std::invalid_argument("apply_thresholds: score/threshold mismatch");
    }
    std::vector<std::int64_t> predicted;
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (row[l] >= tau[l]) {
        predicted.push_back(static_cast<std::int64_t>(l));
      }
    }
    out.push_back(std::move(predicted));
  }
  return out;
}

}  // namespace meshidx::eval
