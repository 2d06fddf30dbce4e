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

#ifndef MESHIDX_NN_TENSOR_HPP
#define MESHIDX_NN_TENSOR_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace meshidx::nn {

using Index = std::int64_t;

namespace detail {

struct Node {
  std::vector<Index> shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated lazily
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  Index size() const { return static_cast<Index>(value.size()); }
  void ensure_grad() {
    if (grad.size() != value.size()) {
      grad.assign(value.size(), 0.0);
    }
  }
};

}  // namespace detail

/// Dense row-major double tensor; a value-semantic handle to a node in a
/// dynamically built computation graph. Ops in ops.hpp record the pullback
/// needed for reverse-mode differentiation. Leaf values may be edited in
/// place between graph builds (grad checking relies on this); derived nodes
/// must be rebuilt after such edits.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<Index> shape, bool requires_grad = false);
  static Tensor full(std::vector<Index> shape, double value,
                     bool requires_grad = false);
  static Tensor from_data(std::vector<Index> shape, std::vector<double> data,
                          bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor identity(Index n);
  /// Entries drawn from [lo, hi) with a library-independent mapping, so a
  /// seed pins the exact values.
  static Tensor uniform(std::vector<Index> shape, double lo, double hi,
                        std::mt19937_64& rng, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const std::vector<Index>& shape() const;
  int rank() const;
  Index dim(int axis) const;
  Index size() const;

  std::vector<double>& values();
  const std::vector<double>& values() const;
  double at(std::initializer_list<Index> idx) const;
  double item() const;  // scalar tensors only

  bool requires_grad() const;
  /// Gradient buffer (allocated zero on first access).
  const std::vector<double>& grad() const;
  void zero_grad();

  /// Reverse-mode accumulation from this scalar into every reachable
  /// requires_grad node. Gradients add up across calls until zero_grad().
  void backward() const;

  /// Deep copy detached from any graph.
  Tensor detached_copy() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }
  static Tensor wrap(std::shared_ptr<detail::Node> node);

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

Index shape_size(const std::vector<Index>& shape);

}  // namespace meshidx::nn

#endif  // MESHIDX_NN_TENSOR_HPP
