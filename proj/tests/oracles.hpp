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

// Independent reference implementations used as test oracles. Everything
// here is written from the metric/operator definitions with plain set
// arithmetic and nested loops, deliberately sharing no code with the
// library implementations it checks.

#ifndef MESHIDX_TESTS_ORACLES_HPP
#define MESHIDX_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace meshidx::testing {

// ---------------------------------------------------------------------------
// Numeric oracles
// ---------------------------------------------------------------------------

/// Triple-loop matrix product, row-major.
inline std::vector<double> naive_matmul(const std::vector<double>& a,
                                        const std::vector<double>& b, int m,
                                        int k, int n) {
  std::vector<double> c(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int l = 0; l < k; ++l) {
        acc += a[static_cast<std::size_t>(i * k + l)] *
               b[static_cast<std::size_t>(l * n + j)];
      }
      c[static_cast<std::size_t>(i * n + j)] = acc;
    }
  }
  return c;
}

/// Nested-loop valid-padding dilated 1-D convolution.
/// input [l x c_in], kernels [s x c_in x c_out].
inline std::vector<double> naive_dilated_conv1d(const std::vector<double>& input,
                                                const std::vector<double>& kernels,
                                                int l, int c_in, int s, int c_out,
                                                int dilation) {
  const int l_out = l - (s - 1) * dilation;
  std::vector<double> out(static_cast<std::size_t>(l_out) * c_out, 0.0);
  for (int t = 0; t < l_out; ++t) {
    for (int co = 0; co < c_out; ++co) {
      double acc = 0.0;
      for (int j = 0; j < s; ++j) {
        for (int ci = 0; ci < c_in; ++ci) {
          acc += input[static_cast<std::size_t>((t + j * dilation) * c_in + ci)] *
                 kernels[static_cast<std::size_t>((j * c_in + ci) * c_out + co)];
        }
      }
      out[static_cast<std::size_t>(t * c_out + co)] = acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metric oracles (direct set arithmetic)
// ---------------------------------------------------------------------------

using Sets = std::vector<std::set<std::int64_t>>;

struct OracleBipartition {
  double ebp = 0, ebr = 0, ebf = 0;
  double mip = 0, mir = 0, mif = 0;
  double map = 0, mar = 0, maf = 0;
};

inline double oracle_harmonic(double p, double r) {
  return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
}

inline OracleBipartition oracle_bipartition(const Sets& gold, const Sets& pred,
                                            std::int64_t label_count) {
  OracleBipartition o;
  const auto n = gold.size();

  double psum = 0, rsum = 0;
  std::size_t rdocs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::int64_t> inter;
    std::set_intersection(gold[i].begin(), gold[i].end(), pred[i].begin(),
                          pred[i].end(), std::inserter(inter, inter.begin()));
    psum += pred[i].empty()
                ? 0.0
                : static_cast<double>(inter.size()) /
                      static_cast<double>(pred[i].size());
    if (!gold[i].empty()) {
      rsum += static_cast<double>(inter.size()) /
              static_cast<double>(gold[i].size());
      ++rdocs;
    }
  }
  o.ebp = n ? psum / static_cast<double>(n) : 0.0;
  o.ebr = rdocs ? rsum / static_cast<double>(rdocs) : 0.0;
  o.ebf = oracle_harmonic(o.ebp, o.ebr);

  double tp_sum = 0, fp_sum = 0, fn_sum = 0;
  double map_sum = 0, mar_sum = 0;
  std::int64_t macro_n = 0;
  for (std::int64_t l = 0; l < label_count; ++l) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_gold = gold[i].count(l) > 0;
      const bool in_pred = pred[i].count(l) > 0;
      tp += (in_gold && in_pred) ? 1 : 0;
      fp += (!in_gold && in_pred) ? 1 : 0;
      fn += (in_gold && !in_pred) ? 1 : 0;
    }
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
    if (tp + fp + fn > 0) {
      map_sum += (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
      mar_sum += (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
      ++macro_n;
    }
  }
  o.mip = (tp_sum + fp_sum) > 0 ? tp_sum / (tp_sum + fp_sum) : 0.0;
  o.mir = (tp_sum + fn_sum) > 0 ? tp_sum / (tp_sum + fn_sum) : 0.0;
  o.mif = oracle_harmonic(o.mip, o.mir);
  o.map = macro_n ? map_sum / static_cast<double>(macro_n) : 0.0;
  o.mar = macro_n ? mar_sum / static_cast<double>(macro_n) : 0.0;
  o.maf = oracle_harmonic(o.map, o.mar);
  return o;
}

/// Top-k by score with ascending-ordinal tie-break, via full stable sort.
inline std::vector<std::int64_t> oracle_top_k(const std::vector<double>& scores,
                                              int k) {
  std::vector<std::int64_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::int64_t a, std::int64_t b) {
    return scores[static_cast<std::size_t>(a)] >
           scores[static_cast<std::size_t>(b)];
  });
  if (static_cast<int>(idx.size()) > k) {
    idx.resize(static_cast<std::size_t>(k));
  }
  return idx;
}

struct OracleRanked {
  std::vector<double> p_at;
  std::vector<double> r_at;
};

inline OracleRanked oracle_ranked(const Sets& gold,
                                  const std::vector<std::vector<double>>& scores,
                                  const std::vector<int>& ks) {
  OracleRanked o;
  o.p_at.assign(ks.size(), 0.0);
  o.r_at.assign(ks.size(), 0.0);
  std::size_t rdocs = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].empty()) {
      ++rdocs;
    }
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      auto top = oracle_top_k(scores[i], ks[ki]);
      double hits = 0;
      for (std::int64_t l : top) {
        hits += gold[i].count(l) > 0 ? 1 : 0;
      }
      o.p_at[ki] += hits / static_cast<double>(ks[ki]);
      if (!gold[i].empty()) {
        o.r_at[ki] += hits / static_cast<double>(gold[i].size());
      }
    }
  }
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    o.p_at[ki] /= gold.empty() ? 1.0 : static_cast<double>(gold.size());
    o.r_at[ki] = rdocs ? o.r_at[ki] / static_cast<double>(rdocs) : 0.0;
  }
  return o;
}

inline double oracle_micro_f_at(const std::vector<std::vector<double>>& scores,
                                const Sets& gold, std::int64_t label_count,
                                const std::vector<double>& tau) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::int64_t l = 0; l < label_count; ++l) {
      const bool predicted =
          scores[i][static_cast<std::size_t>(l)] >= tau[static_cast<std::size_t>(l)];
      const bool in_gold = gold[i].count(l) > 0;
      tp += (predicted && in_gold) ? 1 : 0;
      fp += (predicted && !in_gold) ? 1 : 0;
      fn += (!predicted && in_gold) ? 1 : 0;
    }
  }
  const double denom = 2 * tp + fp + fn;
  return denom > 0 ? 2 * tp / denom : 0.0;
}

/// Candidate grid for one label: midpoints of adjacent distinct scores plus
/// the two boundary midpoints toward 0 and 1.
inline std::vector<double> oracle_candidates(std::vector<double> col) {
  std::sort(col.begin(), col.end());
  col.erase(std::unique(col.begin(), col.end()), col.end());
  std::vector<double> c;
  c.push_back(col.front() / 2.0);
  for (std::size_t i = 0; i + 1 < col.size(); ++i) {
    c.push_back((col[i] + col[i + 1]) / 2.0);
  }
  c.push_back((col.back() + 1.0) / 2.0);
  return c;
}

/// Exhaustive grid search over the product of per-label candidate sets;
/// returns the best micro-F found. Exponential, callers keep L tiny.
inline double oracle_exhaustive_grid_mif(
    const std::vector<std::vector<double>>& scores, const Sets& gold,
    std::int64_t label_count) {
  std::vector<std::vector<double>> grids;
  for (std::int64_t l = 0; l < label_count; ++l) {
    std::vector<double> col;
    for (const auto& row : scores) {
      col.push_back(row[static_cast<std::size_t>(l)]);
    }
    grids.push_back(oracle_candidates(std::move(col)));
  }
  std::vector<std::size_t> pick(static_cast<std::size_t>(label_count), 0);
  std::vector<double> tau(static_cast<std::size_t>(label_count));
  double best = -1.0;
  for (;;) {
    for (std::int64_t l = 0; l < label_count; ++l) {
      tau[static_cast<std::size_t>(l)] =
          grids[static_cast<std::size_t>(l)][pick[static_cast<std::size_t>(l)]];
    }
    best = std::max(best, oracle_micro_f_at(scores, gold, label_count, tau));
    std::int64_t carry = 0;
    while (carry < label_count) {
      auto i = static_cast<std::size_t>(carry);
      if (++pick[i] < grids[i].size()) {
        break;
      }
      pick[i] = 0;
      ++carry;
    }
    if (carry == label_count) {
      break;
    }
  }
  return best;
}

}  // namespace meshidx::testing

#endif  // MESHIDX_TESTS_ORACLES_HPP
