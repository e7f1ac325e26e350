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

#include "psflab/speckle.hpp"

#include "psflab/aberration.hpp"
#include "psflab/rng.hpp"
#include "psflab/sigproc.hpp"

namespace psflab {

RealPatch generate_scatterers(const Grid& grid, std::uint64_t seed) {
  RealPatch out(grid, RealKind::Scatterer);
  Rng rng(seed);
  for (Index r = 0; r < grid.nz; ++r)
    for (Index c = 0; c < grid.nx; ++c) out.data(r, c) = rng.normal();
  return out;
}

RealPatch delta_scatterers(const Grid& grid) {
  RealPatch out(grid, RealKind::Scatterer);
  out.data(grid.center_row(), grid.center_col()) = 1.0;
  return out;
}

Index fast_fft_size(Index n) {
  if (n <= 1) return 1;
  for (Index m = n;; ++m) {
    Index k = m;
    for (Index p : {2, 3, 5})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

ImageR convolve(const ImageR& f, const ImageR& h, Crop crop) {
  if (f.size() == 0 || h.size() == 0) throw InvalidArgument("convolve: empty input");
  const Index fz = f.rows() + h.rows() - 1;
  const Index fx = f.cols() + h.cols() - 1;
  const Index pz = fast_fft_size(fz);
  const Index px = fast_fft_size(fx);

  ImageC F = ImageC::Zero(pz, px);
  ImageC H = ImageC::Zero(pz, px);
  F.topLeftCorner(f.rows(), f.cols()) = f.cast<std::complex<double>>();
  H.topLeftCorner(h.rows(), h.cols()) = h.cast<std::complex<double>>();
  fft2_inplace(F, false);
  fft2_inplace(H, false);
  F *= H;
  fft2_inplace(F, true);
  const ImageR full = F.real() / static_cast<double>(pz * px);

  if (crop == Crop::Full) return full.topLeftCorner(fz, fx);
  return full.block(h.rows() / 2, h.cols() / 2, f.rows(), f.cols());
}

RealPatch convolve(const RealPatch& f, const RealPatch& h, Crop crop, bool normalize) {
  if (!f.grid.same_spacing(h.grid)) throw InvalidArgument("convolve: grid spacing mismatch");
  check_patch(f);
  check_patch(h);
  RealPatch out;
  out.kind = RealKind::RF;
  out.data = convolve(f.data, h.data, crop);
  out.grid = f.grid;
  if (crop == Crop::Full) {
    out.grid.nz = out.data.rows();
    out.grid.nx = out.data.cols();
    out.grid.z0 = f.grid.z0 - static_cast<double>(h.grid.nz / 2) * f.grid.dz;
    out.grid.x0 = f.grid.x0 - static_cast<double>(h.grid.nx / 2) * f.grid.dx;
  }
  if (normalize) {
    const double peak = out.data.abs().maxCoeff();
    if (peak > 0.0) out.data /= peak;
  }
  return out;
}

TrainingPair make_pair(const SimConfig& cfg, const Grid& grid, std::uint64_t profile_seed,
                       std::uint64_t scatterer_seed, PairOptions options) {
  TrainingPair pair;
  pair.cfg = cfg;
  pair.profile_seed = profile_seed;
  pair.scatterer_seed = scatterer_seed;
  pair.aberration_level = cfg.max_phase_error;
  const AberrationProfile profile = generate_phase_screen(cfg, profile_seed);
  pair.psf = simulate_psf(cfg, profile, grid);
  const RealPatch f = options.delta_scatterer ? delta_scatterers(grid) : generate_scatterers(grid, scatterer_seed);
  pair.speckle = convolve(f, pair.psf, options.crop);
  return pair;
}

double aberration_level_for(std::uint64_t base_seed, std::uint64_t index) {
  constexpr std::uint64_t kLevelStream = 0x4c45'5645'4c00'0000ULL;
  Rng rng(derive_seed(base_seed, kLevelStream + index));
  return kAberrationLevels[static_cast<std::size_t>(rng.below(kAberrationLevels.size()))];
}

TrainingPair dataset_pair(const SimConfig& cfg, const Grid& grid, std::uint64_t base_seed, std::uint64_t index) {
  SimConfig c = cfg;
  c.max_phase_error = aberration_level_for(base_seed, index);
  return make_pair(c, grid, profile_seed_for(base_seed, index), scatterer_seed_for(base_seed, index));
}

}  // namespace psflab
