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

#ifndef PSFLAB_ORACLE_HPP
#define PSFLAB_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "psflab/metrics.hpp"
#include "psflab/speckle.hpp"

namespace psflab {

/// Non-blind Wiener estimate of the PSF from speckle and its known scatterers:
///
///   H = G conj(F) / (|F|^2 + eps max|F|^2)
///
/// Both inputs are zero-padded to a common size that holds the full linear
/// convolution. The speckle is placed at the offset implied by the grid
/// origins, so a Crop::Full speckle inverts exactly and a Crop::Same speckle
/// is treated as a truncated observation. The result is cropped to the
/// scatterer grid and normalized to unit peak.
RealPatch wiener_recover_psf(const RealPatch& speckle, const RealPatch& scatterers, double eps);

struct OracleCase {
  double aberration_level = 0.0;
  std::uint64_t profile_seed = 0;
  std::uint64_t scatterer_seed = 0;
  double ssim = 0.0;
  double iou_mean = 0.0;
  bool pass = false;
};

struct OracleReport {
  double eps = 0.0;
  double min_ssim = 0.0;
  double min_iou = 0.0;
  std::vector<OracleCase> cases;
  bool pass = false;
};

/// Generate, recover and score one pair per aberration level.
OracleReport run_oracle_check(const SimConfig& cfg, const Grid& grid, std::uint64_t seed, double eps = 1e-6,
                              double min_ssim = 0.98, double min_iou = 0.9);

}  // namespace psflab

#endif  // PSFLAB_ORACLE_HPP
