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

#ifndef PSFLAB_NN_LOSS_HPP
#define PSFLAB_NN_LOSS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "psflab/nn/bmode.hpp"

namespace psflab::nn {

enum class Domain { RF, KSpace };

enum class LossKind { L1, L2, SSIM, Feature, L1_Bmode, L2_Bmode, SSIM_Bmode, Feature_Bmode };

inline constexpr std::array<LossKind, 8> kAllLossKinds = {
    LossKind::L1,       LossKind::L2,       LossKind::SSIM,       LossKind::Feature,
    LossKind::L1_Bmode, LossKind::L2_Bmode, LossKind::SSIM_Bmode, LossKind::Feature_Bmode};

/// Lower-case names: l1, l2, ssim, feature, l1_bmode, ...
std::string to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);
std::string to_string(Domain d);
Domain parse_domain(std::string_view name);

bool is_bmode(LossKind kind);

/// Frozen feature extractor: four 3 x 3 conv + LeakyReLU stages with
/// {8, 16, 32, 32} channels and strides {1, 2, 2, 2}, He-initialized from a
/// fixed seed. Returns the activation of every stage.
template <typename S>
class FeaturePyramid {
 public:
  FeaturePyramid(Index in_channels, std::uint64_t seed);
  std::vector<Tensor<S>> operator()(const Tensor<S>& x) const;
  Index in_channels() const { return in_channels_; }

 private:
  Index in_channels_;
  std::vector<Tensor<S>> weights_, biases_;
};

/// Gaussian-window SSIM as a differentiable scalar. The window is the 11-tap
/// sigma 1.5 kernel, shortened to the largest odd length that fits when the
/// input is smaller than 11 pixels.
template <typename S>
Tensor<S> ssim(const Tensor<S>& a, const Tensor<S>& b, double range);

/// Per-domain loss evaluator. Holds the B-mode parameters and lazily built
/// feature pyramids.
template <typename S>
class LossFunction {
 public:
  LossFunction(LossKind kind, Domain domain, BmodeParams bmode, std::uint64_t feature_seed = 0x5eed'f00dULL);

  /// pred and target share a shape: (1, H, W) for RF, packed (2, H, W) for k-space.
  Tensor<S> operator()(const Tensor<S>& pred, const Tensor<S>& target) const;

  LossKind kind() const { return kind_; }
  Domain domain() const { return domain_; }

 private:
  Tensor<S> chain(const Tensor<S>& y) const;
  const FeaturePyramid<S>& pyramid(Index channels) const;

  LossKind kind_;
  Domain domain_;
  BmodeParams bmode_;
  std::uint64_t feature_seed_;
  mutable std::map<Index, FeaturePyramid<S>> pyramids_;
};

}  // namespace psflab::nn

#endif  // PSFLAB_NN_LOSS_HPP
