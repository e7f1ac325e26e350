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

#include "psflab/nn/loss.hpp"

#include <cctype>
#include <cmath>

#include "psflab/nn/ops.hpp"
#include "psflab/rng.hpp"

namespace psflab::nn {
namespace {

constexpr double kFeatureSlope = 0.2;

struct NameEntry {
  LossKind kind;
  const char* name;
};
constexpr NameEntry kNames[] = {
    {LossKind::L1, "l1"},           {LossKind::L2, "l2"},
    {LossKind::SSIM, "ssim"},       {LossKind::Feature, "feature"},
    {LossKind::L1_Bmode, "l1_bmode"}, {LossKind::L2_Bmode, "l2_bmode"},
    {LossKind::SSIM_Bmode, "ssim_bmode"}, {LossKind::Feature_Bmode, "feature_bmode"},
};

Eigen::VectorXd gaussian_kernel(Index size, double sigma) {
  Eigen::VectorXd w(size);
  for (Index i = 0; i < size; ++i) {
    const double d = static_cast<double>(i - size / 2);
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return w / w.sum();
}

LossKind raw_kind(LossKind k) {
  switch (k) {
    case LossKind::L1_Bmode: return LossKind::L1;
    case LossKind::L2_Bmode: return LossKind::L2;
    case LossKind::SSIM_Bmode: return LossKind::SSIM;
    case LossKind::Feature_Bmode: return LossKind::Feature;
    default: return k;
  }
}

}  // namespace

std::string to_string(LossKind kind) {
  for (const auto& e : kNames)
    if (e.kind == kind) return e.name;
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  std::string lower(name);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  for (const auto& e : kNames)
    if (lower == e.name) return e.kind;
  throw InvalidArgument("unknown loss kind '" + std::string(name) + "'");
}

std::string to_string(Domain d) { return d == Domain::RF ? "rf" : "kspace"; }

Domain parse_domain(std::string_view name) {
  if (name == "rf") return Domain::RF;
  if (name == "kspace") return Domain::KSpace;
  throw InvalidArgument("unknown domain '" + std::string(name) + "'");
}

bool is_bmode(LossKind kind) { return raw_kind(kind) != kind; }

template <typename S>
FeaturePyramid<S>::FeaturePyramid(Index in_channels, std::uint64_t seed) : in_channels_(in_channels) {
  constexpr Index channels[4] = {8, 16, 32, 32};
  Rng rng(seed);
  Index cin = in_channels;
  for (Index cout : channels) {
    const double std = std::sqrt(2.0 / ((1.0 + kFeatureSlope * kFeatureSlope) * static_cast<double>(cin * 9)));
    typename Node<S>::Array w(cout * cin * 9);
    for (Index i = 0; i < w.size(); ++i) w[i] = static_cast<S>(std * rng.normal());
    weights_.push_back(Tensor<S>::from(Shape{cout, cin, 9}, std::move(w)));
    biases_.push_back(Tensor<S>::zeros(Shape{cout, 1, 1}));
    cin = cout;
  }
}

template <typename S>
std::vector<Tensor<S>> FeaturePyramid<S>::operator()(const Tensor<S>& x) const {
  std::vector<Tensor<S>> feats;
  Tensor<S> h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const int stride = l == 0 ? 1 : 2;
    if (stride == 2 && (h.shape().h < 2 || h.shape().w < 2)) break;
    h = leaky_relu(conv2d(h, weights_[l], biases_[l], stride), kFeatureSlope);
    feats.push_back(h);
  }
  return feats;
}

template <typename S>
Tensor<S> ssim(const Tensor<S>& a, const Tensor<S>& b, double range) {
  if (!(a.shape() == b.shape())) throw InvalidArgument("ssim: shape mismatch");
  Index size = std::min<Index>(11, std::min(a.shape().h, a.shape().w));
  if (size % 2 == 0) --size;
  const Eigen::VectorXd w = gaussian_kernel(size, 1.5);
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);
  const auto mu_a = separable_filter_valid(a, w);
  const auto mu_b = separable_filter_valid(b, w);
  const auto mu_aa = mul(mu_a, mu_a);
  const auto mu_bb = mul(mu_b, mu_b);
  const auto mu_ab = mul(mu_a, mu_b);
  const auto s_aa = sub(separable_filter_valid(mul(a, a), w), mu_aa);
  const auto s_bb = sub(separable_filter_valid(mul(b, b), w), mu_bb);
  const auto s_ab = sub(separable_filter_valid(mul(a, b), w), mu_ab);
  const auto num = mul(add_scalar(scale(mu_ab, 2.0), c1), add_scalar(scale(s_ab, 2.0), c2));
  const auto den = mul(add_scalar(add(mu_aa, mu_bb), c1), add_scalar(add(s_aa, s_bb), c2));
  return mean(div(num, den));
}

template <typename S>
LossFunction<S>::LossFunction(LossKind kind, Domain domain, BmodeParams bmode, std::uint64_t feature_seed)
    : kind_(kind), domain_(domain), bmode_(bmode), feature_seed_(feature_seed) {}

template <typename S>
Tensor<S> LossFunction<S>::chain(const Tensor<S>& y) const {
  return domain_ == Domain::RF ? bmode_chain(y, bmode_) : bmode_chain_kspace(y, bmode_);
}

template <typename S>
const FeaturePyramid<S>& LossFunction<S>::pyramid(Index channels) const {
  auto it = pyramids_.find(channels);
  if (it == pyramids_.end()) it = pyramids_.emplace(channels, FeaturePyramid<S>(channels, feature_seed_)).first;
  return it->second;
}

template <typename S>
Tensor<S> LossFunction<S>::operator()(const Tensor<S>& pred, const Tensor<S>& target) const {
  if (!(pred.shape() == target.shape()))
    throw InvalidArgument("loss: prediction " + pred.shape().str() + " vs target " + target.shape().str());
  Tensor<S> a = pred, b = target;
  double range = 0.0;
  if (is_bmode(kind_)) {
    a = chain(pred);
    b = chain(target);
    range = bmode_.dr;
  } else {
    range = static_cast<double>(target.value().maxCoeff() - target.value().minCoeff());
  }
  switch (raw_kind(kind_)) {
    case LossKind::L1: return mean(abs(sub(a, b)));
    case LossKind::L2: return mean(square(sub(a, b)));
    case LossKind::SSIM:
      if (!(range > 0.0)) throw InvalidArgument("ssim loss: constant target");
      return add_scalar(scale(ssim(a, b, range), -1.0), 1.0);
    case LossKind::Feature: {
      if (is_bmode(kind_)) {
        a = scale(a, 1.0 / bmode_.dr);
        b = scale(b, 1.0 / bmode_.dr);
      }
      const auto& net = pyramid(a.shape().c);
      const auto fa = net(a);
      const auto fb = net(b);
      Tensor<S> total;
      for (std::size_t l = 0; l < fa.size(); ++l) {
        auto term = mean(square(sub(fa[l], fb[l])));
        total = total.defined() ? add(total, term) : term;
      }
      return total;
    }
    default: break;
  }
  throw InvalidArgument("loss: unknown kind");
}

template class FeaturePyramid<float>;
template class FeaturePyramid<double>;
template class LossFunction<float>;
template class LossFunction<double>;
template Tensor<float> ssim(const Tensor<float>&, const Tensor<float>&, double);
template Tensor<double> ssim(const Tensor<double>&, const Tensor<double>&, double);

}  // namespace psflab::nn
