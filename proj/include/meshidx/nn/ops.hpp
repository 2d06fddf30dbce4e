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

#ifndef MESHIDX_NN_OPS_HPP
#define MESHIDX_NN_OPS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "meshidx/nn/tensor.hpp"

namespace meshidx::nn {

/// Elementwise sum; shapes must match.
Tensor add(const Tensor& a, const Tensor& b);

/// Elementwise product; shapes must match.
Tensor mul(const Tensor& a, const Tensor& b);

/// Multiplication by a fixed scalar.
Tensor scale(const Tensor& a, double factor);

/// [m x k] * [k x n] -> [m x n]. Pullbacks: dA = dC * B^T, dB = A^T * dC.
Tensor matmul(const Tensor& a, const Tensor& b);

/// 2-D transpose.
Tensor transpose(const Tensor& a);

Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

/// Shift-stable softmax along `axis`; slices sum to 1.
Tensor softmax(const Tensor& a, int axis);

/// Valid (no padding) 1-D convolution with dilated taps.
/// input [l x c_in], kernels [s x c_in x c_out] -> [(l - (s-1)*dilation) x c_out].
/// Throws std::invalid_argument when the receptive field exceeds l.
Tensor dilated_conv1d(const Tensor& input, const Tensor& kernels, Index dilation);

/// Row gather: ids index into table [V x d] -> [ids.size() x d]. The pullback
/// scatter-adds into the table rows.
Tensor embedding_lookup(std::span<const Index> ids, const Tensor& table);

/// Inverted dropout: in training mode zeroes entries with probability `rate`
/// and rescales survivors by 1/(1-rate); identity in inference mode. The
/// seed pins the mask.
Tensor dropout(const Tensor& a, double rate, std::uint64_t seed, bool training);

/// Summed binary cross-entropy over all entries, with predictions clamped to
/// [kBceEpsilon, 1-kBceEpsilon] before the logs.
inline constexpr double kBceEpsilon = 1e-7;
Tensor bce_loss(const Tensor& predictions, const Tensor& targets);

/// [m x n] -> [m]; sums each row.
Tensor row_sum(const Tensor& a);

/// Sum of all entries -> scalar.
Tensor sum_all(const Tensor& a);

}  // namespace meshidx::nn

#endif  // MESHIDX_NN_OPS_HPP
