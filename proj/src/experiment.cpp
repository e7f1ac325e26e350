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

#include "psflab/experiment.hpp"

#include "psflab/dataset.hpp"
#include "psflab/nn/checkpoint.hpp"
#include "psflab/parallel.hpp"
#include "psflab/speckle.hpp"

namespace psflab {

SplitDataset generate_split(const SimConfig& cfg, const Grid& grid, std::size_t n_train, std::size_t n_val,
                            std::uint64_t base_seed, unsigned workers) {
  std::vector<TrainingPair> pairs(n_train + n_val);
  parallel_for(pairs.size(), workers, [&](std::size_t i) { pairs[i] = dataset_pair(cfg, grid, base_seed, i); });
  SplitDataset out;
  out.cfg = cfg;
  out.grid = grid;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i < n_train) {
      out.train_psfs.push_back(std::move(pairs[i].psf));
    } else {
      out.val_speckle.push_back(std::move(pairs[i].speckle));
      out.val_psfs.push_back(std::move(pairs[i].psf));
      out.val_index.push_back(i);
    }
  }
  return out;
}

SplitDataset load_split(const std::filesystem::path& dir, std::size_t n_val) {
  const Manifest m = read_manifest(dir);
  if (!m.complete) throw IoError((dir / "manifest.json").string(), "dataset is marked incomplete");
  if (n_val >= m.pairs.size()) throw InvalidArgument("load_split: validation count leaves no training pairs");
  SplitDataset out;
  out.cfg = m.cfg;
  out.grid = m.grid;
  const std::size_t n_train = m.pairs.size() - n_val;
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    if (i < n_train) {
      out.train_psfs.push_back(load_psf(dir, m, i));
    } else {
      out.val_speckle.push_back(load_speckle(dir, m, i));
      out.val_psfs.push_back(load_psf(dir, m, i));
      out.val_index.push_back(m.pairs[i].index);
    }
  }
  return out;
}

Evaluation evaluate_model(const nn::UNet<float>& model, const SplitDataset& data) {
  Evaluation ev;
  for (std::size_t i = 0; i < data.val_psfs.size(); ++i)
    ev.per_pair.push_back(
        evaluate_psf(nn::predict_psf(model, data.val_speckle[i]), data.val_psfs[i], data.cfg.dynamic_range));
  ev.mean = mean_report(ev.per_pair);
  return ev;
}

ExperimentResult run_experiment(const SplitDataset& data, const nn::ModelConfig& model_cfg, std::uint64_t model_seed,
                                const nn::TrainConfig& train_cfg, nn::UNet<float>* trained) {
  nn::UNet<float> model(model_cfg, model_seed);
  ExperimentResult res;
  res.log = nn::train(model, data.train_psfs, data.cfg, train_cfg);
  res.eval = evaluate_model(model, data);
  if (trained) *trained = model;
  return res;
}

}  // namespace psflab
