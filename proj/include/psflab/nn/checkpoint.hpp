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

#ifndef PSFLAB_NN_CHECKPOINT_HPP
#define PSFLAB_NN_CHECKPOINT_HPP

#include <filesystem>

#include <json.hpp>

#include "psflab/nn/unet.hpp"

namespace psflab::nn {

nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Writes <stem>.ut (every parameter concatenated as one f32 vector) and
/// <stem>.json (model config, tensor names, shapes and offsets, CRC of the
/// weights file, plus `extra`). Returns the manifest path.
std::filesystem::path save_checkpoint(const std::filesystem::path& dir, const std::string& stem,
                                      const UNet<float>& model, const nlohmann::json& extra = nlohmann::json::object());

/// Rebuilds the model from a manifest written by save_checkpoint.
UNet<float> load_checkpoint(const std::filesystem::path& manifest_path);

/// Copies weights between models of identical configuration.
void copy_weights(const UNet<float>& from, UNet<float>& to);

}  // namespace psflab::nn

#endif  // PSFLAB_NN_CHECKPOINT_HPP
