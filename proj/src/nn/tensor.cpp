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

#include "meshidx/nn/tensor.hpp"

#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "meshidx/util.hpp"

namespace meshidx::nn {

Index shape_size(const std::vector<Index>& shape) {
  Index n = 1;
  for (Index d : shape) {
    if (d <= 0) {
      throw std::invalid_argument("tensor dimensions must be positive");
    }
    n *= d;
  }
  return n;
}

Tensor Tensor::wrap(std::shared_ptr<detail::Node> node) {
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(std::vector<Index> shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(std::vector<Index> shape, double value, bool requires_grad) {
  auto node = std::make_shared<detail::Node>();
  Index n = shape_size(shape);
  node->shape = std::move(shape);
  node->value.assign(static_cast<std::size_t>(n), value);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from_data(std::vector<Index> shape, std::vector<double> data,
                         bool requires_grad) {
  Index n = shape_size(shape);
  if (static_cast<std::size_t>(n) != data.size()) {
    throw std::invalid_argument("tensor data size does not match shape");
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from_data({1}, {value}, requires_grad);
}

Tensor Tensor::identity(Index n) {
  Tensor t = zeros({n, n});
  for (Index i = 0; i < n; ++i) {
    t.node_->value[static_cast<std::size_t>(i * n + i)] = 1.0;
  }
  return t;
}

Tensor Tensor::uniform(std::vector<Index> shape, double lo, double hi,
                       std::mt19937_64& rng, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (double& v : t.node_->value) {
    v = lo + (hi - lo) * uniform01(rng);
  }
  return t;
}

const std::vector<Index>& Tensor::shape() const { return node_->shape; }

int Tensor::rank() const { return static_cast<int>(node_->shape.size()); }

Index Tensor::dim(int axis) const {
  return node_->shape.at(static_cast<std::size_t>(axis));
}

Index Tensor::size() const { return node_->size(); }

std::vector<double>& Tensor::values() { return node_->value; }

const std::vector<double>& Tensor::values() const { return node_->value; }

double Tensor::at(std::initializer_list<Index> idx) const {
  if (idx.size() != node_->shape.size()) {
    throw std::invalid_argument("index rank mismatch");
  }
  Index flat = 0;
  int axis = 0;
  for (Index i : idx) {
    if (i < 0 || i >= node_->shape[static_cast<std::size_t>(axis)]) {
      throw std::out_of_range("tensor index out of range");
    }
    flat = flat * node_->shape[static_cast<std::size_t>(axis)] + i;
    ++axis;
  }
  return node_->value[static_cast<std::size_t>(flat)];
}

double Tensor::item() const {
  if (node_->value.size() != 1) {
    throw std::invalid_argument("item() requires a single-element tensor");
  }
  return node_->value[0];
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

const std::vector<double>& Tensor::grad() const {
  node_->ensure_grad();
  return node_->grad;
}

void Tensor::zero_grad() {
  if (node_ && !node_->grad.empty()) {
    std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
  }
}

void Tensor::backward() const {
  if (!node_) {
    throw std::invalid_argument("backward() on an undefined tensor");
  }
  if (node_->value.size() != 1) {
    throw std::invalid_argument("backward() requires a scalar root");
  }

  // Post-order DFS; reversing it yields consumers-before-producers, so every
  // node's incoming gradient is complete before its pullback runs.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next_parent] = stack.back();
    if (next_parent < n->parents.size()) {
      detail::Node* parent = n->parents[next_parent++].get();
      if (parent->requires_grad && !visited.contains(parent)) {
        visited.insert(parent);
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad();
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_fn) {
      (*it)->backward_fn(**it);
    }
  }
}

Tensor Tensor::detached_copy() const {
  auto node = std::make_shared<detail::Node>();
  node->shape = node_->shape;
  node->value = node_->value;
  node->requires_grad = node_->requires_grad;
  return Tensor(std::move(node));
}

}  // namespace meshidx::nn
