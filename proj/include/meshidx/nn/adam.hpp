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

#ifndef MESHIDX_NN_ADAM_HPP
#define MESHIDX_NN_ADAM_HPP

#include <vector>

#include "meshidx/nn/tensor.hpp"

namespace meshidx::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lr_decay = 1.0;  // applied per decay_lr() call (epoch boundary)
};

/// Adam with bias correction. The learning-rate decay is caller-triggered at
/// epoch boundaries via decay_lr().
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Tensor> params, AdamConfig config);

  /// Applies one update from the parameters' accumulated gradients.
  void step();
  void zero_grad();
  void decay_lr() { lr_ *= config_.lr_decay; }

  double learning_rate() const { return lr_; }
  long step_count() const { return step_count_; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
  AdamConfig config_;
  double lr_;
  long step_count_ = 0;
};

}  // namespace meshidx::nn

#endif  // MESHIDX_NN_ADAM_HPP
