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

#include "psflab/nn/checkpoint.hpp"

#include "psflab/io/hash.hpp"
#include "psflab/io/tensor_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace psflab::nn {
namespace {

constexpr const char* kFormat = "psflab-weights";
constexpr int kVersion = 1;

}  // namespace

json to_json(const ModelConfig& cfg) {
  return {{"levels", cfg.levels},
          {"base_channels", cfg.base_channels},
          {"kernel", cfg.kernel},
          {"slope", cfg.slope},
          {"domain", to_string(cfg.domain)}};
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig cfg;
  j.at("levels").get_to(cfg.levels);
  j.at("base_channels").get_to(cfg.base_channels);
  j.at("kernel").get_to(cfg.kernel);
  j.at("slope").get_to(cfg.slope);
  cfg.domain = parse_domain(j.at("domain").get<std::string>());
  return cfg;
}

fs::path save_checkpoint(const fs::path& dir, const std::string& stem, const UNet<float>& model, const json& extra) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
  io::TensorData data;
  json tensors = json::array();
  std::size_t offset = 0;
  for (const auto& p : model.parameters()) {
    const Shape s = p.tensor.shape();
    tensors.push_back({{"name", p.name}, {"shape", {s.c, s.h, s.w}}, {"offset", offset}, {"count", s.numel()}});
    data.values.insert(data.values.end(), p.tensor.value().data(), p.tensor.value().data() + p.tensor.numel());
    offset += static_cast<std::size_t>(p.tensor.numel());
  }
  data.dims = {static_cast<std::uint32_t>(offset)};
  const auto bytes = io::encode_tensor(data);
  const std::string weights_name = stem + ".ut";
  io::write_bytes(dir / weights_name, bytes);

  json manifest = {{"format", kFormat},          {"version", kVersion},
                   {"model", to_json(model.config())}, {"weights_file", weights_name},
                   {"crc32", io::crc32_hex(bytes)},     {"tensors", std::move(tensors)},
                   {"extra", extra}};
  const fs::path manifest_path = dir / (stem + ".json");
  io::write_text(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

UNet<float> load_checkpoint(const fs::path& manifest_path) {
  json manifest;
  try {
    const auto text = io::read_bytes(manifest_path);
    manifest = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw IoError(manifest_path.string(), std::string("invalid JSON: ") + e.what());
  }
  try {
    if (manifest.at("format") != kFormat || manifest.at("version") != kVersion)
      throw IoError(manifest_path.string(), "not a weights manifest of a supported version");
    const fs::path weights_path = manifest_path.parent_path() / manifest.at("weights_file").get<std::string>();
    const auto bytes = io::read_bytes(weights_path);
    if (io::crc32_hex(bytes) != manifest.at("crc32").get<std::string>())
      throw io::FormatError(weights_path.string(), "checksum differs from manifest");
    const io::TensorData data = io::decode_tensor(bytes, weights_path.string());
    UNet<float> model(model_config_from_json(manifest.at("model")), 0);
    const auto params = model.parameters();
    const auto& entries = manifest.at("tensors");
    if (entries.size() != params.size()) throw io::FormatError(manifest_path.string(), "tensor count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& e = entries[i];
      auto t = params[i].tensor;
      const std::size_t offset = e.at("offset").get<std::size_t>();
      if (e.at("name").get<std::string>() != params[i].name ||
          e.at("count").get<Index>() != t.numel() || offset + static_cast<std::size_t>(t.numel()) > data.values.size())
        throw io::FormatError(manifest_path.string(), "tensor layout mismatch at " + params[i].name);
      for (Index k = 0; k < t.numel(); ++k) t.value()[k] = data.values[offset + static_cast<std::size_t>(k)];
    }
    return model;
  } catch (const json::exception& e) {
    throw IoError(manifest_path.string(), std::string("malformed manifest: ") + e.what());
  }
}

void copy_weights(const UNet<float>& from, UNet<float>& to) {
  if (!(from.config() == to.config())) throw InvalidArgument("copy_weights: model configurations differ");
  auto src = from.parameters();
  auto dst = to.parameters();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i].tensor.value() = src[i].tensor.value();
}

}  // namespace psflab::nn
