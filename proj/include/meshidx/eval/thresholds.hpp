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

#ifndef MESHIDX_EVAL_THRESHOLDS_HPP
#define MESHIDX_EVAL_THRESHOLDS_HPP

#include <cstdint>
#include <vector>

#include "meshidx/eval/metrics.hpp"

namespace meshidx::eval {

/// Per-label candidate thresholds: midpoints between adjacent distinct
/// scores of the label, plus the boundary midpoints (0 + min)/2 and
/// (max + 1)/2 so tuning can predict everything or nothing.
std::vector<double> threshold_candidates(std::vector<double> label_scores);

/// Coordinate-ascent micro-F threshold tuning. One pass updates each label's
/// threshold to the candidate maximizing corpus micro-F with the others held
/// fixed (ties toward the larger threshold); passes repeat until a sweep
/// changes nothing, capped at `max_sweeps`. Starts from uniform 0.5 and
/// falls back to uniform 0.5 if tuning somehow ends below it, so the result
/// is never worse than the untuned default.
std::vector<double> tune_thresholds(const ScoreMatrix& scores,
                                    const LabelSets& gold, int max_sweeps = 5);

/// Label i is predicted iff score >= tau[i] (closed comparison).
LabelSets apply_thresholds(const ScoreMatrix& scores,
                           const std::vector<double>& tau);

}  // namespace meshidx::eval

#endif  // MESHIDX_EVAL_THRESHOLDS_HPP
