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

#include "meshidx/eval/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace meshidx::eval {

namespace {

double harmonic(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::int64_t intersection_size(const std::vector<std::int64_t>& a,
                               const std::vector<std::int64_t>& b) {
  std::int64_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

void check_sizes(const LabelSets& gold, const LabelSets& predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold and predicted document counts differ");
  }
}

struct Confusion {
  std::vector<std::int64_t> tp;
  std::vector<std::int64_t> fp;
  std::vector<std::int64_t> fn;
};

Confusion count_confusion(const LabelSets& gold, const LabelSets& predicted,
                          std::int64_t label_count) {
  Confusion c;
  c.tp.assign(static_cast<std::size_t>(label_count), 0);
  c.fp.assign(static_cast<std::size_t>(label_count), 0);
  c.fn.assign(static_cast<std::size_t>(label_count), 0);
  for (std::size_t doc = 0; doc < gold.size(); ++doc) {
    const auto& g = gold[doc];
    const auto& p = predicted[doc];
    auto ig = g.begin();
    auto ip = p.begin();
    while (ig != g.end() || ip != p.end()) {
      if (ip == p.end() || (ig != g.end() && *ig < *ip)) {
        ++c.fn[static_cast<std::size_t>(*ig++)];
      } else if (ig == g.end() || *ip < *ig) {
        ++c.fp[static_cast<std::size_t>(*ip++)];
      } else {
        ++c.tp[static_cast<std::size_t>(*ig)];
        ++ig;
        ++ip;
      }
    }
  }
  return c;
}

void check_ordinals(const LabelSets& sets, std::int64_t label_count,
                    const char* what) {
  for (const auto& s : sets) {
    for (std::int64_t l : s) {
      if (l < 0 || l >= label_count) {
        throw std::out_of_range(std::string(what) + " ordinal " +
                                std::to_string(l) + " outside [0, " +
                                std::to_string(label_count) + ")");
      }
    }
  }
}

}  // namespace

ExampleBased example_based(const LabelSets& gold, const LabelSets& predicted) {
  check_sizes(gold, predicted);
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  std::int64_t recall_docs = 0;
  for (std::size_t doc = 0; doc < gold.size(); ++doc) {
    const std::int64_t hit = intersection_size(gold[doc], predicted[doc]);
    // Empty predictions contribute 0 precision for the document.
    precision_sum += safe_div(static_cast<double>(hit),
                              static_cast<double>(predicted[doc].size()));
    if (!gold[doc].empty()) {
      recall_sum += static_cast<double>(hit) /
                    static_cast<double>(gold[doc].size());
      ++recall_docs;
    }
  }
  ExampleBased out;
  const auto n = static_cast<double>(gold.size());
  out.precision = n > 0.0 ? precision_sum / n : 0.0;
  out.recall = recall_docs > 0 ? recall_sum / static_cast<double>(recall_docs) : 0.0;
  out.f = harmonic(out.precision, out.recall);
  return out;
}

LabelBased label_based(const LabelSets& gold, const LabelSets& predicted,
                       std::int64_t label_count) {
  check_sizes(gold, predicted);
  check_ordinals(gold, label_count, "gold");
  check_ordinals(predicted, label_count, "predicted");
  Confusion c = count_confusion(gold, predicted, label_count);

  std::int64_t tp_total = 0;
  std::int64_t fp_total = 0;
  std::int64_t fn_total = 0;
  double macro_p_sum = 0.0;
  double macro_r_sum = 0.0;
  std::int64_t macro_labels = 0;
  std::int64_t excluded = 0;
  for (std::int64_t l = 0; l < label_count; ++l) {
    auto i = static_cast<std::size_t>(l);
    tp_total += c.tp[i];
    fp_total += c.fp[i];
    fn_total += c.fn[i];
    if (c.tp[i] == 0 && c.fp[i] == 0 && c.fn[i] == 0) {
      ++excluded;
      continue;
    }
    macro_p_sum += safe_div(static_cast<double>(c.tp[i]),
                            static_cast<double>(c.tp[i] + c.fp[i]));
    macro_r_sum += safe_div(static_cast<double>(c.tp[i]),
                            static_cast<double>(c.tp[i] + c.fn[i]));
    ++macro_labels;
  }

  LabelBased out;
  out.micro_precision = safe_div(static_cast<double>(tp_total),
                                 static_cast<double>(tp_total + fp_total));
  out.micro_recall = safe_div(static_cast<double>(tp_total),
                              static_cast<double>(tp_total + fn_total));
  out.micro_f = harmonic(out.micro_precision, out.micro_recall);
  out.macro_precision =
      macro_labels > 0 ? macro_p_sum / static_cast<double>(macro_labels) : 0.0;
  out.macro_recall =
      macro_labels > 0 ? macro_r_sum / static_cast<double>(macro_labels) : 0.0;
  out.macro_f = harmonic(out.macro_precision, out.macro_recall);
  out.macro_excluded_labels = excluded;
  return out;
}

double micro_f(const LabelSets& gold, const LabelSets& predicted,
               std::int64_t label_count) {
  check_sizes(gold, predicted);
  check_ordinals(gold, label_count, "gold");
  check_ordinals(predicted, label_count, "predicted");
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (std::size_t doc = 0; doc < gold.size(); ++doc) {
    const std::int64_t hit = intersection_size(gold[doc], predicted[doc]);
    tp += hit;
    fp += static_cast<std::int64_t>(predicted[doc].size()) - hit;
    fn += static_cast<std::int64_t>(gold[doc].size()) - hit;
  }
  const std::int64_t denom = 2 * tp + fp + fn;
  return denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom)
                   : 0.0;
}

std::vector<std::int64_t> top_k_indices(std::span<const double> scores, int k) {
  std::vector<std::int64_t> order(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    order[i] = static_cast<std::int64_t>(i);
  }
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)),
                                          scores.size());
  std::partial_sort(order.begin(),
                    order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::int64_t a, std::int64_t b) {
                      double sa = scores[static_cast<std::size_t>(a)];
                      double sb = scores[static_cast<std::size_t>(b)];
                      if (sa != sb) {
                        return sa > sb;
                      }
                      return a < b;
                    });
  order.resize(keep);
  return order;
}

RankedMetrics ranked(const LabelSets& gold, const ScoreMatrix& scores,
                     std::span<const int> ks) {
  if (gold.size() != scores.size()) {
    throw std::invalid_argument("gold and score document counts differ");
  }
  RankedMetrics out;
  out.ks.assign(ks.begin(), ks.end());
  out.precision_at.assign(ks.size(), 0.0);
  out.recall_at.assign(ks.size(), 0.0);
  if (gold.empty()) {
    return out;
  }

  std::vector<double> precision_sum(ks.size(), 0.0);
  std::vector<double> recall_sum(ks.size(), 0.0);
  std::int64_t recall_docs = 0;
  for (std::size_t doc = 0; doc < gold.size(); ++doc) {
    const auto& g = gold[doc];
    const int max_k = *std::max_element(ks.begin(), ks.end());
    std::vector<std::int64_t> top = top_k_indices(scores[doc], max_k);
    if (!g.empty()) {
      ++recall_docs;
    }
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      const auto k = static_cast<std::size_t>(ks[ki]);
      std::int64_t hits = 0;
      for (std::size_t r = 0; r < std::min(k, top.size()); ++r) {
        if (std::binary_search(g.begin(), g.end(), top[r])) {
          ++hits;
        }
      }
      precision_sum[ki] += static_cast<double>(hits) / static_cast<double>(k);
      if (!g.empty()) {
        recall_sum[ki] +=
            static_cast<double>(hits) / static_cast<double>(g.size());
      }
    }
  }
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    out.precision_at[ki] = precision_sum[ki] / static_cast<double>(gold.size());
    out.recall_at[ki] =
        recall_docs > 0 ? recall_sum[ki] / static_cast<double>(recall_docs) : 0.0;
  }
  return out;
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["bipartition"] = {
      {"example_based",
       {{"EBF", example.f}, {"EBP", example.precision}, {"EBR", example.recall}}},
      {"micro_averaged",
       {{"MiF", label.micro_f},
        {"MiP", label.micro_precision},
        {"MiR", label.micro_recall}}},
      {"macro_averaged",
       {{"MaF", label.macro_f},
        {"MaP", label.macro_precision},
        {"MaR", label.macro_recall},
        {"excluded_labels", label.macro_excluded_labels}}},
  };
  nlohmann::ordered_json ranking_json;
  for (std::size_t i = 0; i < ranking.ks.size(); ++i) {
    ranking_json["P@" + std::to_string(ranking.ks[i])] = ranking.precision_at[i];
  }
  for (std::size_t i = 0; i < ranking.ks.size(); ++i) {
    ranking_json["R@" + std::to_string(ranking.ks[i])] = ranking.recall_at[i];
  }
  j["ranking"] = std::move(ranking_json);
  return j;
}

MetricsReport full_report(const LabelSets& gold, const LabelSets& predicted,
                          const ScoreMatrix& scores, std::int64_t label_count,
                          std::span<const int> ks) {
  MetricsReport report;
  report.example = example_based(gold, predicted);
  report.label = label_based(gold, predicted, label_count);
  if (!scores.empty()) {
    report.ranking = ranked(gold, scores, ks);
  }
  return report;
}

}  // namespace meshidx::eval
