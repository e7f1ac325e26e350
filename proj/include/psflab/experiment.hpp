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

#ifndef PSFLAB_EXPERIMENT_HPP
#define PSFLAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "psflab/metrics.hpp"
#include "psflab/nn/train.hpp"

namespace psflab {

/// Training PSFs plus held-out (speckle, PSF) validation pairs.
struct SplitDataset {
  SimConfig cfg;
  Grid grid;
  std::vector<RealPatch> train_psfs;
  std::vector<RealPatch> val_speckle;
  std::vector<RealPatch> val_psfs;
  std::vector<std::uint64_t> val_index;  // dataset pair index of each validation pair
};

/// Generates pairs 0 .. n_train + n_val - 1 of the dataset seeded with
/// base_seed; the last n_val are held out. Uses `workers` threads.
SplitDataset generate_split(const SimConfig& cfg, const Grid& grid, std::size_t n_train, std::size_t n_val,
                            std::uint64_t base_seed, unsigned workers = 1);

/// Loads a dataset directory and holds out its last n_val pairs.
SplitDataset load_split(const std::filesystem::path& dir, std::size_t n_val);

struct Evaluation {
  std::vector<MetricsReport> per_pair;
  MetricsReport mean;
};

Evaluation evaluate_model(const nn::UNet<float>& model, const SplitDataset& data);

struct ExperimentResult {
  nn::TrainLog log;
  Evaluation eval;
};

/// Builds a model from (model_cfg, model_seed), trains it on the split's
/// training PSFs and scores it on the validation pairs.
ExperimentResult run_experiment(const SplitDataset& data, const nn::ModelConfig& model_cfg, std::uint64_t model_seed,
                                const nn::TrainConfig& train_cfg, nn::UNet<float>* trained = nullptr);

}  // namespace psflab

#endif  // PSFLAB_EXPERIMENT_HPP
