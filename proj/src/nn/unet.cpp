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

#include "psflab/nn/unet.hpp"

#include <cmath>

#include "psflab/nn/ops.hpp"

namespace psflab::nn {

template <typename S>
Tensor<S> complex_conv2d(const Tensor<S>& x, const Tensor<S>& w_re, const Tensor<S>& w_im, const Tensor<S>& b_re,
                         const Tensor<S>& b_im, int stride) {
  if (x.shape().c % 2 != 0) throw InvalidArgument("complex_conv2d: packed input needs an even channel count");
  return conv2d(x, complex_block_weight(w_re, w_im), concat_channels<S>({b_re, b_im}), stride);
}

template <typename S>
Tensor<S> concat_complex(const Tensor<S>& a, const Tensor<S>& b) {
  const Index ca = a.shape().c / 2, cb = b.shape().c / 2;
  return concat_channels<S>({slice_channels(a, 0, ca), slice_channels(b, 0, cb), slice_channels(a, ca, ca),
                             slice_channels(b, cb, cb)});
}

template <typename S>
Tensor<S> ConvLayer<S>::operator()(const Tensor<S>& x) const {
  return complex ? complex_conv2d(x, w, w_im, b, b_im, stride) : conv2d(x, w, b, stride);
}

template <typename S>
ConvLayer<S> UNet<S>::make_layer(Index cin, Index cout, int kernel, int stride, bool linear, Rng& rng) const {
  ConvLayer<S> layer;
  layer.complex = complex_;
  layer.stride = stride;
  const Index kk = static_cast<Index>(kernel) * kernel;
  const double gain2 = linear ? 1.0 : 2.0 / (1.0 + cfg_.slope * cfg_.slope);
  double std = std::sqrt(gain2 / static_cast<double>(cin * kk));
  if (complex_) std /= std::sqrt(2.0);
  auto draw = [&] {
    typename Node<S>::Array w(cout * cin * kk);
    for (Index i = 0; i < w.size(); ++i) w[i] = static_cast<S>(std * rng.normal());
    return Tensor<S>::from(Shape{cout, cin, kk}, std::move(w), true);
  };
  layer.w = draw();
  layer.b = Tensor<S>::zeros(Shape{cout, 1, 1}, true);
  if (complex_) {
    layer.w_im = draw();
    layer.b_im = Tensor<S>::zeros(Shape{cout, 1, 1}, true);
  }
  return layer;
}

template <typename S>
UNet<S>::UNet(const ModelConfig& cfg, std::uint64_t seed) : cfg_(cfg), complex_(cfg.domain == Domain::KSpace) {
  if (cfg.levels < 1) throw InvalidArgument("UNet: levels must be at least 1");
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0) throw InvalidArgument("UNet: kernel must be odd");
  const Index base = complex_ ? cfg.base_channels / 2 : cfg.base_channels;
  if (base < 1) throw InvalidArgument("UNet: base_channels too small");
  Rng rng(seed);
  auto ch = [&](int l) { return base << l; };
  // Channel counts below are complex channels for complex layers.
  enc_a_.push_back(make_layer(1, ch(0), cfg.kernel, 1, false, rng));
  enc_b_.push_back(make_layer(ch(0), ch(0), cfg.kernel, 1, false, rng));
  for (int l = 1; l <= cfg.levels; ++l) {
    enc_a_.push_back(make_layer(ch(l - 1), ch(l), cfg.kernel, 2, false, rng));
    enc_b_.push_back(make_layer(ch(l), ch(l), cfg.kernel, 1, false, rng));
  }
  for (int l = 0; l < cfg.levels; ++l) {
    dec_up_.push_back(make_layer(ch(l + 1), ch(l), cfg.kernel, 1, false, rng));
    dec_merge_.push_back(make_layer(2 * ch(l), ch(l), cfg.kernel, 1, false, rng));
  }
  head_ = make_layer(ch(0), 1, 1, 1, true, rng);
}

template <typename S>
Tensor<S> UNet<S>::forward(const Tensor<S>& x) const {
  const Shape s = x.shape();
  const Index div = Index{1} << cfg_.levels;
  if (s.c != io_channels())
    throw InvalidArgument("UNet: expected " + std::to_string(io_channels()) + " input channels, got " + s.str());
  if (s.h % div != 0 || s.w % div != 0)
    throw InvalidArgument("UNet: spatial size " + s.str() + " not divisible by " + std::to_string(div));
  const double a = cfg_.slope;
  std::vector<Tensor<S>> skips;
  Tensor<S> h = x;
  for (int l = 0; l <= cfg_.levels; ++l) {
    h = leaky_relu(enc_a_[l](h), a);
    h = leaky_relu(enc_b_[l](h), a);
    if (l < cfg_.levels) skips.push_back(h);
  }
  for (int l = cfg_.levels - 1; l >= 0; --l) {
    h = leaky_relu(dec_up_[l](upsample_nearest2x(h)), a);
    h = complex_ ? concat_complex(h, skips[l]) : concat_channels<S>({h, skips[l]});
    h = leaky_relu(dec_merge_[l](h), a);
  }
  return head_(h);
}

template <typename S>
std::vector<NamedTensor<S>> UNet<S>::parameters() const {
  std::vector<NamedTensor<S>> out;
  auto add = [&](const std::string& name, const ConvLayer<S>& layer) {
    if (layer.complex) {
      out.push_back({name + ".w_re", layer.w});
      out.push_back({name + ".w_im", layer.w_im});
      out.push_back({name + ".b_re", layer.b});
      out.push_back({name + ".b_im", layer.b_im});
    } else {
      out.push_back({name + ".w", layer.w});
      out.push_back({name + ".b", layer.b});
    }
  };
  for (std::size_t l = 0; l < enc_a_.size(); ++l) {
    add("enc" + std::to_string(l) + ".a", enc_a_[l]);
    add("enc" + std::to_string(l) + ".b", enc_b_[l]);
  }
  for (std::size_t l = 0; l < dec_up_.size(); ++l) {
    add("dec" + std::to_string(l) + ".up", dec_up_[l]);
    add("dec" + std::to_string(l) + ".merge", dec_merge_[l]);
  }
  add("head", head_);
  return out;
}

template <typename S>
Index UNet<S>::parameter_count() const {
  Index n = 0;
  for (const auto& p : parameters()) n += p.tensor.numel();
  return n;
}

template class UNet<float>;
template class UNet<double>;
template struct ConvLayer<float>;
template struct ConvLayer<double>;
template Tensor<float> complex_conv2d(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&,
                                      const Tensor<float>&, const Tensor<float>&, int);
template Tensor<double> complex_conv2d(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&,
                                       const Tensor<double>&, const Tensor<double>&, int);
template Tensor<float> concat_complex(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> concat_complex(const Tensor<double>&, const Tensor<double>&);

}  // namespace psflab::nn
