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

#include "meshidx/nn/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace meshidx::nn {

double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                  const std::vector<Tensor>& point, double eps) {
  // Analytic pass.
  for (const Tensor& t : point) {
    const_cast<Tensor&>(t).zero_grad();
  }
  Tensor out = f(point);
  if (out.size() != 1) {
    throw std::invalid_argument("grad_check: f must return a scalar");
  }
  out.backward();
  std::vector<std::vector<double>> analytic;
  analytic.reserve(point.size());
  for (const Tensor& t : point) {
    analytic.push_back(t.grad());
  }

  double max_rel = 0.0;
  for (std::size_t p = 0; p < point.size(); ++p) {
    Tensor t = point[p];
    if (!t.requires_grad()) {
      continue;
    }
    auto& values = t.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double plus = f(point).item();
      values[i] = saved - eps;
      const double minus = f(point).item();
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[p][i];
      const double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
      max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace meshidx::nn
