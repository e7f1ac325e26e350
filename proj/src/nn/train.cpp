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

#include "psflab/nn/train.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "psflab/nn/bmode.hpp"
#include "psflab/nn/checkpoint.hpp"
#include "psflab/rng.hpp"
#include "psflab/sigproc.hpp"
#include "psflab/speckle.hpp"

namespace psflab::nn {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348'0000'0000'0000ULL;
constexpr std::uint64_t kStepStream = 0x5354'0000'0000'0000ULL;
constexpr std::uint64_t kFixedStream = 0x4658'0000'0000'0000ULL;

std::string diverged(std::int64_t step, double lr, LossKind kind, const std::string& what) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "training diverged at step %lld (lr %.3g, loss %s): ", static_cast<long long>(step), lr,
                to_string(kind).c_str());
  return buf + what;
}

}  // namespace

Tensor<float> model_input(const RealPatch& speckle_rf, Domain domain) {
  const double rms = std::sqrt(speckle_rf.data.square().mean());
  if (!(rms > 0.0)) throw InvalidArgument("model_input: all-zero speckle");
  const ImageR x = speckle_rf.data / rms;
  return domain == Domain::RF ? tensor_from_image<float>(x) : tensor_from_image<float>(psflab::fft2_centered(x));
}

Tensor<float> model_target(const RealPatch& psf_rf, Domain domain) {
  return domain == Domain::RF ? tensor_from_image<float>(psf_rf.data) : tensor_from_image<float>(psflab::fft2_centered(psf_rf.data));
}

ImageR output_to_rf(const Tensor<float>& out, Domain domain) {
  if (domain == Domain::RF) return real_image(out);
  return psflab::ifft2_centered(complex_image(out)).real();
}

RealPatch predict_psf(const UNet<float>& model, const RealPatch& speckle_rf) {
  const Domain d = model.config().domain;
  return RealPatch(speckle_rf.grid, RealKind::RF, output_to_rf(model.forward(model_input(speckle_rf, d)), d));
}

RealPatch training_speckle(const RealPatch& psf, std::uint64_t scatterer_seed) {
  return convolve(generate_scatterers(psf.grid, scatterer_seed), psf, Crop::Same);
}

std::uint64_t training_scatterer_seed(const TrainConfig& cfg, std::int64_t step, std::size_t psf_index) {
  return cfg.fixed_scatterers ? derive_seed(cfg.seed, kFixedStream + psf_index)
                              : derive_seed(cfg.seed, kStepStream + static_cast<std::uint64_t>(step));
}

TrainLog train(UNet<float>& model, const std::vector<RealPatch>& psfs, const SimConfig& sim, const TrainConfig& cfg,
               const std::function<void(const StepInfo&)>& on_step) {
  if (psfs.empty()) throw InvalidArgument("train: no training PSFs");
  if (cfg.epochs < 0 || cfg.repeats < 1) throw InvalidArgument("train: epochs must be >= 0 and repeats >= 1");
  const Domain domain = model.config().domain;
  const LossFunction<float> loss_fn(cfg.loss, domain, BmodeParams::from(sim, psfs.front().grid));

  std::vector<Tensor<float>> params;
  for (auto& p : model.parameters()) params.push_back(p.tensor);
  AdamState<float> adam;
  TrainLog log;

  std::vector<std::size_t> order;
  for (int r = 0; r < cfg.repeats; ++r)
    for (std::size_t i = 0; i < psfs.size(); ++i) order.push_back(i);

  std::int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = step_decay_lr(cfg.lr0, epoch, cfg.decay_every, cfg.decay_factor);
    log.epoch_lr.push_back(lr);
    Rng(derive_seed(cfg.seed, kShuffleStream + static_cast<std::uint64_t>(epoch))).shuffle(order);
    for (const std::size_t i : order) {
      const RealPatch speckle = training_speckle(psfs[i], training_scatterer_seed(cfg, step, i));
      double value = 0.0;
      try {
        for (auto& p : params) p.zero_grad();
        const Tensor<float> loss = loss_fn(model.forward(model_input(speckle, domain)), model_target(psfs[i], domain));
        value = loss.item();
        if (!std::isfinite(value)) throw NumericError("non-finite loss");
        loss.backward();
        for (auto& p : params)
          if (!p.grad().allFinite()) throw NumericError("non-finite gradient");
      } catch (const NumericError& e) {
        throw NumericError(diverged(step, lr, cfg.loss, e.what()));
      }
      adam_step<float>(params, adam, lr);
      log.losses.push_back(value);
      if (on_step) on_step(StepInfo{step, epoch, lr, value});
      ++step;
    }
    if (!cfg.checkpoint_dir.empty()) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "epoch_%03d", epoch);
      const auto first = log.losses.end() - static_cast<std::ptrdiff_t>(order.size());
      const double epoch_loss = std::accumulate(first, log.losses.end(), 0.0) / static_cast<double>(order.size());
      save_checkpoint(cfg.checkpoint_dir, stem, model,
                      {{"epoch", epoch}, {"lr", lr}, {"mean_loss", epoch_loss}, {"steps", step}});
    }
  }
  return log;
}

}  // namespace psflab::nn
