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

#include "meshidx/nn/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "meshidx/util.hpp"

namespace meshidx::nn {

namespace {

using detail::Node;

std::shared_ptr<Node> make_node(std::vector<Index> shape,
                                std::vector<std::shared_ptr<Node>> parents) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value.assign(static_cast<std::size_t>(shape_size(node->shape)), 0.0);
  for (const auto& p : parents) {
    node->requires_grad = node->requires_grad || p->requires_grad;
  }
  node->parents = std::move(parents);
  return node;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  auto node = make_node(a.shape(), {a.node(), b.node()});
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    node->value[i] = av[i] + bv[i];
  }
  node->backward_fn = [](Node& self) {
    for (int p = 0; p < 2; ++p) {
      Node& parent = *self.parents[static_cast<std::size_t>(p)];
      if (!parent.requires_grad) {
        continue;
      }
      parent.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        parent.grad[i] += self.grad[i];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  auto node = make_node(a.shape(), {a.node(), b.node()});
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    node->value[i] = av[i] * bv[i];
  }
  node->backward_fn = [](Node& self) {
    Node& a_node = *self.parents[0];
    Node& b_node = *self.parents[1];
    if (a_node.requires_grad) {
      a_node.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        a_node.grad[i] += self.grad[i] * b_node.value[i];
      }
    }
    if (b_node.requires_grad) {
      b_node.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        b_node.grad[i] += self.grad[i] * a_node.value[i];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor scale(const Tensor& a, double factor) {
  auto node = make_node(a.shape(), {a.node()});
  const auto& av = a.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    node->value[i] = av[i] * factor;
  }
  node->backward_fn = [factor](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      parent.grad[i] += self.grad[i] * factor;
    }
  };
  return Tensor::wrap(node);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw std::invalid_argument("matmul: incompatible shapes");
  }
  const Index m = a.dim(0);
  const Index k = a.dim(1);
  const Index n = b.dim(1);
  auto node = make_node({m, n}, {a.node(), b.node()});
  const auto& av = a.values();
  const auto& bv = b.values();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (Index l = 0; l < k; ++l) {
        acc += av[static_cast<std::size_t>(i * k + l)] *
               bv[static_cast<std::size_t>(l * n + j)];
      }
      node->value[static_cast<std::size_t>(i * n + j)] = acc;
    }
  }
  node->backward_fn = [m, k, n](Node& self) {
    Node& a_node = *self.parents[0];
    Node& b_node = *self.parents[1];
    if (a_node.requires_grad) {
      a_node.ensure_grad();
      for (Index i = 0; i < m; ++i) {
        for (Index l = 0; l < k; ++l) {
          double acc = 0.0;
          for (Index j = 0; j < n; ++j) {
            acc += self.grad[static_cast<std::size_t>(i * n + j)] *
                   b_node.value[static_cast<std::size_t>(l * n + j)];
          }
          a_node.grad[static_cast<std::size_t>(i * k + l)] += acc;
        }
      }
    }
    if (b_node.requires_grad) {
      b_node.ensure_grad();
      for (Index l = 0; l < k; ++l) {
        for (Index j = 0; j < n; ++j) {
          double acc = 0.0;
          for (Index i = 0; i < m; ++i) {
            acc += a_node.value[static_cast<std::size_t>(i * k + l)] *
                   self.grad[static_cast<std::size_t>(i * n + j)];
          }
          b_node.grad[static_cast<std::size_t>(l * n + j)] += acc;
        }
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor transpose(const Tensor& a) {
  if (a.rank() != 2) {
    throw std::invalid_argument("transpose: rank-2 tensor required");
  }
  const Index m = a.dim(0);
  const Index n = a.dim(1);
  auto node = make_node({n, m}, {a.node()});
  const auto& av = a.values();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      node->value[static_cast<std::size_t>(j * m + i)] =
          av[static_cast<std::size_t>(i * n + j)];
    }
  }
  node->backward_fn = [m, n](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        parent.grad[static_cast<std::size_t>(i * n + j)] +=
            self.grad[static_cast<std::size_t>(j * m + i)];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor relu(const Tensor& a) {
  auto node = make_node(a.shape(), {a.node()});
  const auto& av = a.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    node->value[i] = av[i] > 0.0 ? av[i] : 0.0;
  }
  node->backward_fn = [](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (parent.value[i] > 0.0) {
        parent.grad[i] += self.grad[i];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor sigmoid(const Tensor& a) {
  auto node = make_node(a.shape(), {a.node()});
  const auto& av = a.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    node->value[i] = stable_sigmoid(av[i]);
  }
  node->backward_fn = [](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      double y = self.value[i];
      parent.grad[i] += self.grad[i] * y * (1.0 - y);
    }
  };
  return Tensor::wrap(node);
}

Tensor softmax(const Tensor& a, int axis) {
  if (axis < 0 || axis >= a.rank()) {
    throw std::invalid_argument("softmax: axis out of range");
  }
  const auto& shape = a.shape();
  Index outer = 1;
  for (int i = 0; i < axis; ++i) {
    outer *= shape[static_cast<std::size_t>(i)];
  }
  const Index axis_n = shape[static_cast<std::size_t>(axis)];
  Index inner = 1;
  for (int i = axis + 1; i < a.rank(); ++i) {
    inner *= shape[static_cast<std::size_t>(i)];
  }

  auto node = make_node(shape, {a.node()});
  const auto& av = a.values();
  for (Index o = 0; o < outer; ++o) {
    for (Index in = 0; in < inner; ++in) {
      const Index base = o * axis_n * inner + in;
      double max_v = av[static_cast<std::size_t>(base)];
      for (Index k = 1; k < axis_n; ++k) {
        max_v = std::max(max_v, av[static_cast<std::size_t>(base + k * inner)]);
      }
      double sum = 0.0;
      for (Index k = 0; k < axis_n; ++k) {
        double e = std::exp(av[static_cast<std::size_t>(base + k * inner)] - max_v);
        node->value[static_cast<std::size_t>(base + k * inner)] = e;
        sum += e;
      }
      for (Index k = 0; k < axis_n; ++k) {
        node->value[static_cast<std::size_t>(base + k * inner)] /= sum;
      }
    }
  }
  node->backward_fn = [outer, axis_n, inner](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (Index o = 0; o < outer; ++o) {
      for (Index in = 0; in < inner; ++in) {
        const Index base = o * axis_n * inner + in;
        double dot = 0.0;
        for (Index k = 0; k < axis_n; ++k) {
          auto i = static_cast<std::size_t>(base + k * inner);
          dot += self.grad[i] * self.value[i];
        }
        for (Index k = 0; k < axis_n; ++k) {
          auto i = static_cast<std::size_t>(base + k * inner);
          parent.grad[i] += self.value[i] * (self.grad[i] - dot);
        }
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor dilated_conv1d(const Tensor& input, const Tensor& kernels, Index dilation) {
  if (input.rank() != 2 || kernels.rank() != 3) {
    throw std::invalid_argument("dilated_conv1d: input must be [l x c_in], "
                                "kernels [s x c_in x c_out]");
  }
  if (dilation < 1) {
    throw std::invalid_argument("dilated_conv1d: dilation must be positive");
  }
  const Index l = input.dim(0);
  const Index c_in = input.dim(1);
  const Index s = kernels.dim(0);
  const Index c_out = kernels.dim(2);
  if (kernels.dim(1) != c_in) {
    throw std::invalid_argument("dilated_conv1d: channel mismatch");
  }
  const Index l_out = l - (s - 1) * dilation;
  if (l_out < 1) {
    throw std::invalid_argument(
        "dilated_conv1d: sequence of length " + std::to_string(l) +
        " is shorter than the receptive field " +
        std::to_string((s - 1) * dilation + 1));
  }

  auto node = make_node({l_out, c_out}, {input.node(), kernels.node()});
  const auto& in = input.values();
  const auto& kv = kernels.values();
  for (Index t = 0; t < l_out; ++t) {
    for (Index co = 0; co < c_out; ++co) {
      double acc = 0.0;
      for (Index j = 0; j < s; ++j) {
        for (Index ci = 0; ci < c_in; ++ci) {
          acc += in[static_cast<std::size_t>((t + j * dilation) * c_in + ci)] *
                 kv[static_cast<std::size_t>((j * c_in + ci) * c_out + co)];
        }
      }
      node->value[static_cast<std::size_t>(t * c_out + co)] = acc;
    }
  }
  node->backward_fn = [l_out, c_out, s, c_in, dilation](Node& self) {
    Node& in_node = *self.parents[0];
    Node& k_node = *self.parents[1];
    const bool din = in_node.requires_grad;
    const bool dk = k_node.requires_grad;
    if (din) {
      in_node.ensure_grad();
    }
    if (dk) {
      k_node.ensure_grad();
    }
    for (Index t = 0; t < l_out; ++t) {
      for (Index co = 0; co < c_out; ++co) {
        double g = self.grad[static_cast<std::size_t>(t * c_out + co)];
        if (g == 0.0) {
          continue;
        }
        for (Index j = 0; j < s; ++j) {
          for (Index ci = 0; ci < c_in; ++ci) {
            auto in_i = static_cast<std::size_t>((t + j * dilation) * c_in + ci);
            auto k_i = static_cast<std::size_t>((j * c_in + ci) * c_out + co);
            if (din) {
              in_node.grad[in_i] += g * k_node.value[k_i];
            }
            if (dk) {
              k_node.grad[k_i] += g * in_node.value[in_i];
            }
          }
        }
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor embedding_lookup(std::span<const Index> ids, const Tensor& table) {
  if (table.rank() != 2) {
    throw std::invalid_argument("embedding_lookup: table must be [V x d]");
  }
  const Index v = table.dim(0);
  const Index d = table.dim(1);
  const auto n = static_cast<Index>(ids.size());
  if (n == 0) {
    throw std::invalid_argument("embedding_lookup: empty id sequence");
  }
  for (Index id : ids) {
    if (id < 0 || id >= v) {
      throw std::out_of_range("embedding_lookup: id " + std::to_string(id) +
                              " outside table of " + std::to_string(v) + " rows");
    }
  }
  auto node = make_node({n, d}, {table.node()});
  const auto& tv = table.values();
  std::vector<Index> ids_copy(ids.begin(), ids.end());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      node->value[static_cast<std::size_t>(i * d + j)] =
          tv[static_cast<std::size_t>(ids_copy[static_cast<std::size_t>(i)] * d + j)];
    }
  }
  node->backward_fn = [ids = std::move(ids_copy), d](Node& self) {
    Node& table_node = *self.parents[0];
    if (!table_node.requires_grad) {
      return;
    }
    table_node.ensure_grad();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (Index j = 0; j < d; ++j) {
        table_node.grad[static_cast<std::size_t>(ids[i] * d + j)] +=
            self.grad[static_cast<std::size_t>(static_cast<Index>(i) * d + j)];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor dropout(const Tensor& a, double rate, std::uint64_t seed, bool training) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout: rate must be in [0, 1)");
  }
  if (!training || rate == 0.0) {
    return a;
  }
  auto node = make_node(a.shape(), {a.node()});
  const auto& av = a.values();
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(av.size(), 0.0);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (rng.next_double01() >= rate) {
      mask[i] = keep_scale;
    }
    node->value[i] = av[i] * mask[i];
  }
  node->backward_fn = [mask = std::move(mask)](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      parent.grad[i] += self.grad[i] * mask[i];
    }
  };
  return Tensor::wrap(node);
}

Tensor bce_loss(const Tensor& predictions, const Tensor& targets) {
  check_same_shape(predictions, targets, "bce_loss");
  auto node = make_node({1}, {predictions.node(), targets.node()});
  const auto& pv = predictions.values();
  const auto& yv = targets.values();
  double loss = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    double p = std::min(std::max(pv[i], kBceEpsilon), 1.0 - kBceEpsilon);
    loss += -yv[i] * std::log(p) - (1.0 - yv[i]) * std::log(1.0 - p);
  }
  node->value[0] = loss;
  node->backward_fn = [](Node& self) {
    Node& p_node = *self.parents[0];
    Node& y_node = *self.parents[1];
    if (!p_node.requires_grad) {
      return;  // targets are not differentiated
    }
    p_node.ensure_grad();
    const double g = self.grad[0];
    for (std::size_t i = 0; i < p_node.value.size(); ++i) {
      double p = p_node.value[i];
      if (p <= kBceEpsilon || p >= 1.0 - kBceEpsilon) {
        continue;  // flat clamp region
      }
      double y = y_node.value[i];
      p_node.grad[i] += g * (-y / p + (1.0 - y) / (1.0 - p));
    }
  };
  return Tensor::wrap(node);
}

Tensor row_sum(const Tensor& a) {
  if (a.rank() != 2) {
    throw std::invalid_argument("row_sum: rank-2 tensor required");
  }
  const Index m = a.dim(0);
  const Index n = a.dim(1);
  auto node = make_node({m}, {a.node()});
  const auto& av = a.values();
  for (Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      acc += av[static_cast<std::size_t>(i * n + j)];
    }
    node->value[static_cast<std::size_t>(i)] = acc;
  }
  node->backward_fn = [m, n](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        parent.grad[static_cast<std::size_t>(i * n + j)] +=
            self.grad[static_cast<std::size_t>(i)];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor sum_all(const Tensor& a) {
  auto node = make_node({1}, {a.node()});
  const auto& av = a.values();
  double acc = 0.0;
  for (double v : av) {
    acc += v;
  }
  node->value[0] = acc;
  node->backward_fn = [](Node& self) {
    Node& parent = *self.parents[0];
    if (!parent.requires_grad) {
      return;
    }
    parent.ensure_grad();
    for (double& g : parent.grad) {
      g += self.grad[0];
    }
  };
  return Tensor::wrap(node);
}

}  // namespace meshidx::nn
