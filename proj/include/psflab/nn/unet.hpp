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

#ifndef PSFLAB_NN_UNET_HPP
#define PSFLAB_NN_UNET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "psflab/nn/loss.hpp"
#include "psflab/rng.hpp"
#include "psflab/nn/tensor.hpp"

namespace psflab::nn {

struct ModelConfig {
  int levels = 3;
  int base_channels = 16;  // real channels at full resolution
  int kernel = 3;
  double slope = 0.2;
  Domain domain = Domain::RF;

  bool operator==(const ModelConfig&) const = default;
};

/// Complex convolution on packed tensors:
///   out_re = conv(x_re, w_re) - conv(x_im, w_im) + b_re
///   out_im = conv(x_re, w_im) + conv(x_im, w_re) + b_im
template <typename S>
Tensor<S> complex_conv2d(const Tensor<S>& x, const Tensor<S>& w_re, const Tensor<S>& w_im, const Tensor<S>& b_re,
                         const Tensor<S>& b_im, int stride = 1);

/// [a_re, b_re, a_im, b_im] for packed complex a and b.
template <typename S>
Tensor<S> concat_complex(const Tensor<S>& a, const Tensor<S>& b);

template <typename S>
struct NamedTensor {
  std::string name;
  Tensor<S> tensor;
};

/// One real or complex convolution layer with its parameters.
template <typename S>
struct ConvLayer {
  bool complex = false;
  int stride = 1;
  Tensor<S> w, b;        // real layer, or real part of a complex layer
  Tensor<S> w_im, b_im;  // complex layers only

  Tensor<S> operator()(const Tensor<S>& x) const;
};

/// Encoder/decoder with skip connections.
///
///   level 0:      conv, conv                              (c0 channels)
///   level l > 0:  stride-2 conv, conv                     (c0 * 2^l)
///   decoder l:    upsample x2, conv, concat skip l, conv  (c0 * 2^l)
///   head:         1 x 1 conv, linear
///
/// Every conv except the head is followed by LeakyReLU. In the k-space
/// domain all layers are complex with base_channels / 2 complex channels at
/// level 0, and tensors are channel-packed (input and output are (2, H, W)).
template <typename S>
class UNet {
 public:
  UNet(const ModelConfig& cfg, std::uint64_t seed);

  Tensor<S> forward(const Tensor<S>& x) const;

  /// Parameter handles in a fixed order. The tensors alias the model's.
  std::vector<NamedTensor<S>> parameters() const;
  Index parameter_count() const;

  const ModelConfig& config() const { return cfg_; }
  /// Real channels of the input and output tensors.
  Index io_channels() const { return cfg_.domain == Domain::RF ? 1 : 2; }

 private:
  ConvLayer<S> make_layer(Index cin, Index cout, int kernel, int stride, bool linear, Rng& rng) const;

  ModelConfig cfg_;
  bool complex_;
  std::vector<ConvLayer<S>> enc_a_, enc_b_;  // per level
  std::vector<ConvLayer<S>> dec_up_, dec_merge_;  // per level below the bottleneck
  ConvLayer<S> head_;
};

}  // namespace psflab::nn

#endif  // PSFLAB_NN_UNET_HPP
