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

#ifndef PSFLAB_NN_TRAIN_HPP
#define PSFLAB_NN_TRAIN_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "psflab/nn/adam.hpp"
#include "psflab/nn/unet.hpp"

namespace psflab::nn {

struct TrainConfig {
  double lr0 = 1e-3;
  int epochs = 1;
  int decay_every = 10;  // epochs; 0 keeps lr0
  double decay_factor = 0.1;
  int repeats = 1;  // visits of every PSF per epoch
  std::uint64_t seed = 0;
  LossKind loss = LossKind::L1_Bmode;
  /// Reuse one scatterer map per PSF instead of drawing a new one every step.
  bool fixed_scatterers = false;
  /// When set, <dir>/epoch_NNN.{ut,json} is written after every epoch.
  std::filesystem::path checkpoint_dir;
};

struct StepInfo {
  std::int64_t step = 0;
  int epoch = 0;
  double lr = 0.0;
  double loss = 0.0;
};

struct TrainLog {
  std::vector<double> losses;  // one per step
  std::vector<double> epoch_lr;
};

/// RMS-normalized speckle as a model input: (1, H, W) for RF, packed centered
/// k-space (2, H, W) for k-space models.
Tensor<float> model_input(const RealPatch& speckle_rf, Domain domain);
/// Target in the model's output domain.
Tensor<float> model_target(const RealPatch& psf_rf, Domain domain);
/// Model output mapped back to an RF image.
ImageR output_to_rf(const Tensor<float>& out, Domain domain);

/// Predicted RF PSF for one speckle patch, on the speckle's grid.
RealPatch predict_psf(const UNet<float>& model, const RealPatch& speckle_rf);

/// Speckle for a training step: the PSF convolved with a fresh N(0, 1)
/// scatterer map from `scatterer_seed` (same-size crop).
RealPatch training_speckle(const RealPatch& psf, std::uint64_t scatterer_seed);

/// Scatterer seed used at `step` for training PSF `psf_index`.
std::uint64_t training_scatterer_seed(const TrainConfig& cfg, std::int64_t step, std::size_t psf_index);

/// Batch-size-1 Adam training. Each step draws a scatterer map from a stream
/// derived from (seed, step), so the run is a pure function of the inputs.
/// The visiting order is reshuffled every epoch from (seed, epoch).
/// Throws NumericError naming the step, learning rate and loss kind if the
/// loss or any intermediate becomes non-finite.
TrainLog train(UNet<float>& model, const std::vector<RealPatch>& psfs, const SimConfig& sim, const TrainConfig& cfg,
               const std::function<void(const StepInfo&)>& on_step = {});

}  // namespace psflab::nn

#endif  // PSFLAB_NN_TRAIN_HPP
