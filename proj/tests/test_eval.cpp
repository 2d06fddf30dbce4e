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

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "meshidx/eval/metrics.hpp"
#include "meshidx/eval/thresholds.hpp"
#include "meshidx/util.hpp"
#include "oracles.hpp"

using namespace meshidx;
using namespace meshidx::eval;
using meshidx::testing::oracle_bipartition;
using meshidx::testing::oracle_exhaustive_grid_mif;
using meshidx::testing::oracle_micro_f_at;
using meshidx::testing::oracle_ranked;
using meshidx::testing::Sets;

namespace {

Sets to_sets(const LabelSets& sets) {
  Sets out;
  for (const auto& s : sets) {
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

struct RandomInstance {
  LabelSets gold;
  LabelSets pred;
  ScoreMatrix scores;
  std::int64_t label_count;
};

RandomInstance random_instance(std::mt19937_64& rng, int max_docs,
                               int max_labels) {
  RandomInstance inst;
  const int docs = static_cast<int>(rng() % static_cast<std::uint64_t>(max_docs)) + 1;
  inst.label_count =
      static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_labels)) + 1;
  for (int d = 0; d < docs; ++d) {
    std::vector<std::int64_t> gold;
    std::vector<std::int64_t> pred;
    std::vector<double> scores;
    for (std::int64_t l = 0; l < inst.label_count; ++l) {
      if (rng() % 3 == 0) {
        gold.push_back(l);
      }
      if (rng() % 3 == 0) {
        pred.push_back(l);
      }
      scores.push_back(uniform01(rng));
    }
    inst.gold.push_back(std::move(gold));
    inst.pred.push_back(std::move(pred));
    inst.scores.push_back(std::move(scores));
  }
  return inst;
}

}  // namespace

TEST_CASE("example_based worked examples") {
  // gold {A,B}, pred {B,C} with A=0, B=1, C=2.
  ExampleBased e = example_based({{0, 1}}, {{1, 2}});
  CHECK(e.precision == doctest::Approx(0.5));
  CHECK(e.recall == doctest::Approx(0.5));
  CHECK(e.f == doctest::Approx(0.5));

  SUBCASE("perfect prediction scores 1 everywhere") {
    ExampleBased p = example_based({{0, 2}, {1}}, {{0, 2}, {1}});
    CHECK(p.precision == 1.0);
    CHECK(p.recall == 1.0);
    CHECK(p.f == 1.0);
  }
  SUBCASE("an empty prediction contributes zero precision") {
    ExampleBased z = example_based({{0}, {1}}, {{0}, {}});
    CHECK(z.precision == doctest::Approx(0.5));  // (1 + 0) / 2
    CHECK(z.recall == doctest::Approx(0.5));
  }
  SUBCASE("empty gold documents are skipped for recall") {
    ExampleBased g = example_based({{0}, {}}, {{0}, {1}});
    CHECK(g.recall == doctest::Approx(1.0));      // only doc 0 counts
    CHECK(g.precision == doctest::Approx(0.5));   // (1 + 0) / 2
  }
}

TEST_CASE("label_based worked examples") {
  // 2 docs, 3 labels; overall TP=2, FP=1, FN=1.
  LabelSets gold = {{0, 1}, {2}};
  LabelSets pred = {{0, 1}, {1}};
  LabelBased m = label_based(gold, pred, 3);
  CHECK(m.micro_precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.micro_recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.micro_f == doctest::Approx(2.0 / 3.0));

  SUBCASE("perfect prediction gives MiF = MaF = 1") {
    LabelBased p = label_based(gold, gold, 3);
    CHECK(p.micro_f == 1.0);
    CHECK(p.macro_f == 1.0);
  }
  SUBCASE("untouched labels are excluded from the macro average") {
    LabelBased m2 = label_based({{0}}, {{0}}, 10);
    CHECK(m2.macro_excluded_labels == 9);
    CHECK(m2.macro_precision == 1.0);
    CHECK(m2.macro_recall == 1.0);
  }
}

TEST_CASE("ranked worked examples") {
  LabelSets gold = {{0}};
  ScoreMatrix scores = {{0.9, 0.8, 0.1}};
  std::vector<int> ks = {1, 3};
  RankedMetrics r = ranked(gold, scores, ks);
  CHECK(r.precision_at[0] == doctest::Approx(1.0));        // P@1
  CHECK(r.precision_at[1] == doctest::Approx(1.0 / 3.0));  // P@3
  CHECK(r.recall_at[0] == doctest::Approx(1.0));           // R@1

  SUBCASE("empty gold contributes zero hits to P@k and skips R@k") {
    RankedMetrics r2 = ranked({{0}, {}}, {{0.9, 0.1}, {0.9, 0.1}},
                              std::vector<int>{1});
    CHECK(r2.precision_at[0] == doctest::Approx(0.5));
    CHECK(r2.recall_at[0] == doctest::Approx(1.0));
  }
  SUBCASE("ties break toward the lower ordinal") {
    auto top = top_k_indices(std::vector<double>{0.5, 0.7, 0.7}, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == 1);
    CHECK(top[1] == 2);
  }
}

TEST_CASE("metrics match the brute-force set-arithmetic oracle") {
  std::mt19937_64 rng(314);
  const std::vector<int> ks = {1, 3, 5, 10, 15};
  for (int trial = 0; trial < 60; ++trial) {
    RandomInstance inst = random_instance(rng, 20, 15);
    Sets gold_sets = to_sets(inst.gold);
    Sets pred_sets = to_sets(inst.pred);

    auto oracle = oracle_bipartition(gold_sets, pred_sets, inst.label_count);
    ExampleBased e = example_based(inst.gold, inst.pred);
    LabelBased m = label_based(inst.gold, inst.pred, inst.label_count);
    CHECK(std::abs(e.precision - oracle.ebp) <= 1e-12);
    CHECK(std::abs(e.recall - oracle.ebr) <= 1e-12);
    CHECK(std::abs(e.f - oracle.ebf) <= 1e-12);
    CHECK(std::abs(m.micro_precision - oracle.mip) <= 1e-12);
    CHECK(std::abs(m.micro_recall - oracle.mir) <= 1e-12);
    CHECK(std::abs(m.micro_f - oracle.mif) <= 1e-12);
    CHECK(std::abs(m.macro_precision - oracle.map) <= 1e-12);
    CHECK(std::abs(m.macro_recall - oracle.mar) <= 1e-12);
    CHECK(std::abs(m.macro_f - oracle.maf) <= 1e-12);

    auto ranked_oracle = oracle_ranked(gold_sets, inst.scores, ks);
    RankedMetrics r = ranked(inst.gold, inst.scores, ks);
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      CHECK(std::abs(r.precision_at[ki] - ranked_oracle.p_at[ki]) <= 1e-12);
      CHECK(std::abs(r.recall_at[ki] - ranked_oracle.r_at[ki]) <= 1e-12);
    }
  }
}

TEST_CASE("F stays between min and max of precision and recall") {
  std::mt19937_64 rng(271);
  for (int trial = 0; trial < 40; ++trial) {
    RandomInstance inst = random_instance(rng, 12, 9);
    ExampleBased e = example_based(inst.gold, inst.pred);
    if (e.precision + e.recall > 0) {
      CHECK(e.f >= std::min(e.precision, e.recall) - 1e-12);
      CHECK(e.f <= std::max(e.precision, e.recall) + 1e-12);
    }
    LabelBased m = label_based(inst.gold, inst.pred, inst.label_count);
    if (m.micro_precision + m.micro_recall > 0) {
      CHECK(m.micro_f >= std::min(m.micro_precision, m.micro_recall) - 1e-12);
      CHECK(m.micro_f <= std::max(m.micro_precision, m.micro_recall) + 1e-12);
    }
  }
}

TEST_CASE("adding a correct label never decreases recall metrics") {
  std::mt19937_64 rng(161);
  for (int trial = 0; trial < 40; ++trial) {
    RandomInstance inst = random_instance(rng, 10, 8);
    // Find a doc with a missing gold label to add.
    for (std::size_t d = 0; d < inst.gold.size(); ++d) {
      for (std::int64_t l : inst.gold[d]) {
        if (!std::binary_search(inst.pred[d].begin(), inst.pred[d].end(), l)) {
          ExampleBased before = example_based(inst.gold, inst.pred);
          LabelBased mbefore = label_based(inst.gold, inst.pred, inst.label_count);
          LabelSets richer = inst.pred;
          richer[d].push_back(l);
          std::sort(richer[d].begin(), richer[d].end());
          ExampleBased after = example_based(inst.gold, richer);
          LabelBased mafter = label_based(inst.gold, richer, inst.label_count);
          CHECK(after.recall >= before.recall - 1e-12);
          CHECK(mafter.micro_recall >= mbefore.micro_recall - 1e-12);
          goto next_trial;
        }
      }
    }
  next_trial:;
  }
}

TEST_CASE("total hits at k is non-decreasing in k") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = random_instance(rng, 8, 12);
    const std::vector<int> ks = {1, 3, 5, 10, 15};
    RankedMetrics r = ranked(inst.gold, inst.scores, ks);
    for (std::size_t ki = 0; ki + 1 < ks.size(); ++ki) {
      double hits_k = r.precision_at[ki] * ks[ki];
      double hits_next = r.precision_at[ki + 1] * ks[ki + 1];
      CHECK(hits_next >= hits_k - 1e-12);
    }
  }
}

TEST_CASE("apply_thresholds uses a closed comparison") {
  ScoreMatrix scores = {{0.6, 0.5, 0.49}};
  std::vector<double> tau = {0.5, 0.5, 0.5};
  LabelSets out = apply_thresholds(scores, tau);
  CHECK(out[0] == std::vector<std::int64_t>{0, 1});  // 0.5 >= 0.5 predicted

  SUBCASE("tau of 1 with sub-unit scores predicts nothing") {
    std::vector<double> ones(3, 1.0);
    LabelSets none = apply_thresholds({{0.9, 0.99, 0.3}}, ones);
    CHECK(none[0].empty());
  }
}

TEST_CASE("tune_thresholds worked examples") {
  SUBCASE("one label, scores 0.2 and 0.7, gold only on the second") {
    ScoreMatrix scores = {{0.2}, {0.7}};
    LabelSets gold = {{}, {0}};
    std::vector<double> tau = tune_thresholds(scores, gold);
    REQUIRE(tau.size() == 1);
    // Candidates are {0.1, 0.45, 0.85}; 0.45 is the unique best midpoint.
    CHECK(tau[0] == doctest::Approx(0.45));
    CHECK(oracle_micro_f_at(scores, to_sets(gold), 1, tau) == 1.0);
  }
  SUBCASE("an all-positive label gets a threshold below its minimum score") {
    ScoreMatrix scores = {{0.3}, {0.6}, {0.8}};
    LabelSets gold = {{0}, {0}, {0}};
    std::vector<double> tau = tune_thresholds(scores, gold);
    CHECK(tau[0] <= 0.3);
  }
  SUBCASE("tuned thresholds never lose to uniform 0.5") {
    std::mt19937_64 rng(919);
    for (int trial = 0; trial < 30; ++trial) {
      RandomInstance inst = random_instance(rng, 10, 6);
      std::vector<double> tau = tune_thresholds(inst.scores, inst.gold);
      std::vector<double> half(static_cast<std::size_t>(inst.label_count), 0.5);
      Sets gold_sets = to_sets(inst.gold);
      CHECK(oracle_micro_f_at(inst.scores, gold_sets, inst.label_count, tau) >=
            oracle_micro_f_at(inst.scores, gold_sets, inst.label_count, half) -
                1e-12);
    }
  }
}

TEST_CASE("coordinate ascent reaches the exhaustive-grid optimum") {
  std::mt19937_64 rng(636);
  for (int trial = 0; trial < 40; ++trial) {
    const int docs = static_cast<int>(rng() % 8) + 1;
    const std::int64_t labels = static_cast<std::int64_t>(rng() % 4) + 1;
    ScoreMatrix scores;
    LabelSets gold;
    for (int d = 0; d < docs; ++d) {
      std::vector<double> row;
      std::vector<std::int64_t> g;
      for (std::int64_t l = 0; l < labels; ++l) {
        row.push_back(uniform01(rng));
        if (rng() % 2 == 0) {
          g.push_back(l);
        }
      }
      scores.push_back(std::move(row));
      gold.push_back(std::move(g));
    }
    std::vector<double> tau = tune_thresholds(scores, gold);
    Sets gold_sets = to_sets(gold);
    double achieved = oracle_micro_f_at(scores, gold_sets, labels, tau);
    double best = oracle_exhaustive_grid_mif(scores, gold_sets, labels);
    CHECK(achieved == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("metrics report serializes the table row names") {
  MetricsReport report = full_report({{0}}, {{0}}, {{0.9, 0.1}}, 2);
  auto j = report.to_json();
  CHECK(j["bipartition"]["example_based"]["EBF"] == 1.0);
  CHECK(j["bipartition"]["micro_averaged"]["MiF"] == 1.0);
  CHECK(j["bipartition"]["macro_averaged"].contains("MaP"));
  CHECK(j["ranking"].contains("P@1"));
  CHECK(j["ranking"].contains("R@15"));
}
