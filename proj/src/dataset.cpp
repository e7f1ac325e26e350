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

#include "psflab/dataset.hpp"

#include <cstdio>
#include <optional>

#include "psflab/io/hash.hpp"
#include "psflab/io/tensor_file.hpp"
#include "psflab/parallel.hpp"
#include "psflab/serialize.hpp"
#include "psflab/speckle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace psflab {
namespace {

constexpr const char* kFormat = "psflab-dataset";
constexpr int kFormatVersion = 1;

std::string pair_stem(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return buf;
}

void write_manifest(const fs::path& out_dir, const Manifest& m) {
  io::write_text(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
}

std::string write_member(const fs::path& out_dir, const std::string& rel, const RealPatch& p) {
  const auto bytes = io::encode_tensor(io::from_image(p.data));
  io::write_bytes(out_dir / rel, bytes);
  return io::crc32_hex(bytes);
}

RealPatch load_member(const fs::path& dir, const Grid& grid, const std::string& rel, const std::string& crc) {
  const fs::path path = dir / rel;
  const auto bytes = io::read_bytes(path);
  if (io::crc32_hex(bytes) != crc) throw io::FormatError(path.string(), "checksum differs from manifest");
  const ImageR img = io::to_real_image(io::decode_tensor(bytes, path.string()));
  if (img.rows() != grid.nz || img.cols() != grid.nx) throw io::FormatError(path.string(), "shape differs from manifest grid");
  return RealPatch(grid, RealKind::RF, img);
}

}  // namespace

json Manifest::to_json() const {
  json entries = json::array();
  for (const auto& e : pairs)
    entries.push_back({{"index", e.index},
                       {"profile_seed", e.profile_seed},
                       {"scatterer_seed", e.scatterer_seed},
                       {"aberration_level", e.aberration_level},
                       {"speckle", {{"file", e.speckle_file}, {"crc32", e.speckle_crc32}}},
                       {"psf", {{"file", e.psf_file}, {"crc32", e.psf_crc32}}}});
  return json{{"format", kFormat}, {"version", kFormatVersion}, {"complete", complete},
              {"n_pairs", n_pairs}, {"base_seed", base_seed},     {"config", cfg},
              {"grid", grid},       {"pairs", std::move(entries)}};
}

Manifest Manifest::from_json(const json& j) {
  if (j.value("format", "") != kFormat) throw InvalidArgument("manifest: unknown format");
  if (j.value("version", 0) != kFormatVersion) throw InvalidArgument("manifest: unsupported version");
  Manifest m;
  j.at("complete").get_to(m.complete);
  j.at("n_pairs").get_to(m.n_pairs);
  j.at("base_seed").get_to(m.base_seed);
  j.at("config").get_to(m.cfg);
  j.at("grid").get_to(m.grid);
  for (const auto& e : j.at("pairs")) {
    ManifestEntry me;
    e.at("index").get_to(me.index);
    e.at("profile_seed").get_to(me.profile_seed);
    e.at("scatterer_seed").get_to(me.scatterer_seed);
    e.at("aberration_level").get_to(me.aberration_level);
    e.at("speckle").at("file").get_to(me.speckle_file);
    e.at("speckle").at("crc32").get_to(me.speckle_crc32);
    e.at("psf").at("file").get_to(me.psf_file);
    e.at("psf").at("crc32").get_to(me.psf_crc32);
    m.pairs.push_back(std::move(me));
  }
  return m;
}

Manifest make_dataset(const SimConfig& cfg, const Grid& grid, std::uint64_t n_pairs, std::uint64_t base_seed,
                      unsigned workers, const fs::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir / "pairs", ec);
  if (ec) throw IoError((out_dir / "pairs").string(), ec.message());

  Manifest m;
  m.cfg = cfg;
  m.grid = grid;
  m.base_seed = base_seed;
  m.n_pairs = n_pairs;
  write_manifest(out_dir, m);

  std::vector<std::optional<ManifestEntry>> slots(n_pairs);
  auto errors = parallel_for_collect(n_pairs, workers, [&](std::size_t i) {
    const TrainingPair pair = dataset_pair(cfg, grid, base_seed, i);
    ManifestEntry e;
    e.index = i;
    e.profile_seed = pair.profile_seed;
    e.scatterer_seed = pair.scatterer_seed;
    e.aberration_level = pair.aberration_level;
    const std::string stem = "pairs/" + pair_stem(i);
    e.speckle_file = stem + ".speckle.ut";
    e.psf_file = stem + ".psf.ut";
    e.speckle_crc32 = write_member(out_dir, e.speckle_file, pair.speckle);
    e.psf_crc32 = write_member(out_dir, e.psf_file, pair.psf);
    slots[i] = std::move(e);
  });

  std::exception_ptr first;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) m.pairs.push_back(*slots[i]);
    if (errors[i] && !first) first = errors[i];
  }
  m.complete = !first;
  write_manifest(out_dir, m);
  if (first) std::rethrow_exception(first);
  return m;
}

Manifest read_manifest(const fs::path& dataset_dir) {
  const fs::path path = dataset_dir / "manifest.json";
  const auto bytes = io::read_bytes(path);
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw IoError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  try {
    return Manifest::from_json(j);
  } catch (const json::exception& e) {
    throw IoError(path.string(), std::string("malformed manifest: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(path.string(), e.what());
  }
}

RealPatch load_psf(const fs::path& dataset_dir, const Manifest& m, std::size_t i) {
  const auto& e = m.pairs.at(i);
  return load_member(dataset_dir, m.grid, e.psf_file, e.psf_crc32);
}

RealPatch load_speckle(const fs::path& dataset_dir, const Manifest& m, std::size_t i) {
  const auto& e = m.pairs.at(i);
  return load_member(dataset_dir, m.grid, e.speckle_file, e.speckle_crc32);
}

}  // namespace psflab
