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

#ifndef MESHIDX_NN_GRAD_CHECK_HPP
#define MESHIDX_NN_GRAD_CHECK_HPP

#include <functional>
#include <vector>

#include "meshidx/nn/tensor.hpp"

namespace meshidx::nn {

/// Compares the reverse-mode gradient of a scalar-valued function against
/// central differences (f(x+eps) - f(x-eps)) / (2 eps), coordinate-wise over
/// every requires_grad input. Returns the maximum relative error
/// |a - n| / max(1, |a|, |n|).
///
/// `f` must rebuild its graph from the given leaves on every call; inputs
/// are perturbed in place between evaluations.
double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                  const std::vector<Tensor>& point, double eps = 1e-5);

}  // namespace meshidx::nn

#endif  // MESHIDX_NN_GRAD_CHECK_HPP
