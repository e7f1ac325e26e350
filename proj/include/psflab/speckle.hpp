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

#ifndef PSFLAB_SPECKLE_HPP
#define PSFLAB_SPECKLE_HPP

#include <array>
#include <cstdint>

#include "psflab/core.hpp"

namespace psflab {

/// i.i.d. N(0, 1) amplitude at every pixel, drawn row-major from Rng(seed).
RealPatch generate_scatterers(const Grid& grid, std::uint64_t seed);

/// Unit impulse at the grid center.
RealPatch delta_scatterers(const Grid& grid);

enum class Crop {
  Same,  // f's grid; the kernel center (nz/2, nx/2) is the convolution origin
  Full,  // every sample of the linear convolution, (nf + nh - 1) per axis
};

/// Smallest 2^a 3^b 5^c >= n.
Index fast_fft_size(Index n);

/// Zero-padded linear convolution through the FFT.
ImageR convolve(const ImageR& f, const ImageR& h, Crop crop = Crop::Same);

/// Patch form. Grids must share spacing. The Full result has a grid whose
/// origin is shifted by the kernel center so that physical coordinates line
/// up with f. With `normalize` the result is scaled to unit peak magnitude.
RealPatch convolve(const RealPatch& f, const RealPatch& h, Crop crop = Crop::Same, bool normalize = false);

struct TrainingPair {
  RealPatch speckle;  // RF
  RealPatch psf;      // RF
  SimConfig cfg;
  std::uint64_t profile_seed = 0;
  std::uint64_t scatterer_seed = 0;
  double aberration_level = 0.0;
};

struct PairOptions {
  bool delta_scatterer = false;
  Crop crop = Crop::Same;
};

/// Phase screen, PSF, scatterers and speckle for one pair. The aberration
/// level is cfg.max_phase_error.
TrainingPair make_pair(const SimConfig& cfg, const Grid& grid, std::uint64_t profile_seed,
                       std::uint64_t scatterer_seed, PairOptions options = {});

inline constexpr std::array<double, 4> kAberrationLevels = {0.0, kPi / 4.0, 3.0 * kPi / 8.0, kPi / 2.0};

/// Aberration level of pair `index` in a dataset seeded with `base_seed`.
double aberration_level_for(std::uint64_t base_seed, std::uint64_t index);

inline std::uint64_t profile_seed_for(std::uint64_t base_seed, std::uint64_t index) { return base_seed + 2 * index; }
inline std::uint64_t scatterer_seed_for(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed + 2 * index + 1;
}

/// Pair `index` of a dataset: seeds and aberration level derived from base_seed.
TrainingPair dataset_pair(const SimConfig& cfg, const Grid& grid, std::uint64_t base_seed, std::uint64_t index);

}  // namespace psflab

#endif  // PSFLAB_SPECKLE_HPP
