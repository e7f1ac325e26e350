/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The psflab Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PSFLAB_NN_OPS_HPP
#define PSFLAB_NN_OPS_HPP

#include <vector>

#include "psflab/nn/tensor.hpp"

namespace psflab::nn {

/// Same-padded 2D convolution (cross-correlation). Weight shape is
/// (out_channels, in_channels, k * k) for odd k; bias is (out_channels, 1, 1).
/// Stride 2 halves the spatial size.
template <typename S>
Tensor<S> conv2d(const Tensor<S>& x, const Tensor<S>& w, const Tensor<S>& b, int stride = 1);

/// Real block weight equivalent to a complex kernel wr + i wi acting on
/// channel-packed complex tensors [re channels | im channels]:
///   [[wr, -wi],
///    [wi,  wr]]
template <typename S>
Tensor<S> complex_block_weight(const Tensor<S>& wr, const Tensor<S>& wi);

template <typename S>
Tensor<S> leaky_relu(const Tensor<S>& x, double slope);

template <typename S>
Tensor<S> add(const Tensor<S>& a, const Tensor<S>& b);
template <typename S>
Tensor<S> sub(const Tensor<S>& a, const Tensor<S>& b);
template <typename S>
Tensor<S> mul(const Tensor<S>& a, const Tensor<S>& b);
template <typename S>
Tensor<S> div(const Tensor<S>& a, const Tensor<S>& b);
template <typename S>
Tensor<S> scale(const Tensor<S>& a, double s);
template <typename S>
Tensor<S> add_scalar(const Tensor<S>& a, double s);
template <typename S>
Tensor<S> square(const Tensor<S>& a);
template <typename S>
Tensor<S> abs(const Tensor<S>& a);

/// Scalar reductions over every element.
template <typename S>
Tensor<S> sum(const Tensor<S>& a);
template <typename S>
Tensor<S> mean(const Tensor<S>& a);

template <typename S>
Tensor<S> concat_channels(const std::vector<Tensor<S>>& parts);
template <typename S>
Tensor<S> slice_channels(const Tensor<S>& x, Index begin, Index count);

template <typename S>
Tensor<S> upsample_nearest2x(const Tensor<S>& x);

/// Separable filter with the 1D kernel applied along both axes of every
/// channel, valid positions only.
template <typename S>
Tensor<S> separable_filter_valid(const Tensor<S>& x, const Eigen::VectorXd& kernel);

}  // namespace psflab::nn

#endif  // PSFLAB_NN_OPS_HPP
