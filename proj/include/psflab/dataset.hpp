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

#ifndef PSFLAB_DATASET_HPP
#define PSFLAB_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "psflab/core.hpp"

namespace psflab {

struct ManifestEntry {
  std::uint64_t index = 0;
  std::uint64_t profile_seed = 0;
  std::uint64_t scatterer_seed = 0;
  double aberration_level = 0.0;
  std::string speckle_file;  // relative to the dataset root
  std::string speckle_crc32;
  std::string psf_file;
  std::string psf_crc32;

  bool operator==(const ManifestEntry&) const = default;
};

/// Dataset description written as manifest.json. Contains no timestamps or
/// host information, so identical inputs give identical bytes.
struct Manifest {
  SimConfig cfg;
  Grid grid;
  std::uint64_t base_seed = 0;
  std::uint64_t n_pairs = 0;
  bool complete = false;
  std::vector<ManifestEntry> pairs;  // sorted by index

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

/// Writes pairs/NNNNNN.speckle.ut, pairs/NNNNNN.psf.ut and manifest.json
/// under out_dir. Pairs are generated on `workers` threads; the output does
/// not depend on the worker count. If any pair fails, the manifest is written
/// with complete = false listing the pairs that succeeded, and the first
/// error is rethrown.
Manifest make_dataset(const SimConfig& cfg, const Grid& grid, std::uint64_t n_pairs, std::uint64_t base_seed,
                      unsigned workers, const std::filesystem::path& out_dir);

Manifest read_manifest(const std::filesystem::path& dataset_dir);

/// Loads one member after checking its CRC against the manifest.
RealPatch load_psf(const std::filesystem::path& dataset_dir, const Manifest& m, std::size_t i);
RealPatch load_speckle(const std::filesystem::path& dataset_dir, const Manifest& m, std::size_t i);

}  // namespace psflab

#endif  // PSFLAB_DATASET_HPP
