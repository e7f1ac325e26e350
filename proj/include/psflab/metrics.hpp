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

#ifndef PSFLAB_METRICS_HPP
#define PSFLAB_METRICS_HPP

#include <array>
#include <json.hpp>

#include "psflab/core.hpp"

namespace psflab {

/// Normalized 11-tap Gaussian, sigma 1.5.
Eigen::VectorXd ssim_window();

/// Mean SSIM over valid window positions, L = dr, C1 = (0.01 L)^2, C2 = (0.03 L)^2.
/// Both images must be at least 11 x 11.
double ssim_db(const ImageR& a, const ImageR& b, double dr = 60.0);
double ssim_db(const RealPatch& a, const RealPatch& b, double dr = 60.0);

/// Lateral beam pattern: mean over z of each column.
Eigen::VectorXd lateral_beam_pattern(const ImageR& db);

/// L2 distance between lateral beam patterns.
double lbpd(const ImageR& a, const ImageR& b);
double lbpd(const RealPatch& a, const RealPatch& b);

struct IouBands {
  double iou1 = 1.0;  // [40, 60]
  double iou2 = 1.0;  // [20, 40)
  double iou3 = 1.0;  // [0, 20)
  double mean = 1.0;
};

/// Band of a dB value: 1 for [40, inf), 2 for [20, 40), 3 below 20.
int db_band(double v);

/// Per-band intersection over union; an empty union scores 1.
IouBands iou_bands(const ImageR& a, const ImageR& b);
IouBands iou_bands(const RealPatch& a, const RealPatch& b);

/// Inclusive pixel rectangle.
struct MainlobeRegion {
  Index row0 = 0, row1 = -1, col0 = 0, col1 = -1;
  bool contains(Index r, Index c) const { return r >= row0 && r <= row1 && c >= col0 && c <= col1; }
  bool operator==(const MainlobeRegion&) const = default;
};

/// Bounding box of the 4-connected set of pixels at or above -20 dB of the
/// envelope peak that contains the peak.
MainlobeRegion mainlobe_region(const RealPatch& psf_rf);

/// RF energy (sum of h^2) outside the region over energy inside it.
double sidelobe_energy_ratio(const RealPatch& psf_rf, const MainlobeRegion& region);
/// Uses the PSF's own mainlobe region.
double sidelobe_energy_ratio(const RealPatch& psf_rf);

struct MetricsReport {
  double ssim = 0.0;
  double lbpd = 0.0;
  double iou1 = 0.0, iou2 = 0.0, iou3 = 0.0, iou_mean = 0.0;
  double sidelobe_ratio = 0.0;

  nlohmann::json to_json() const;
};

/// Scores a predicted RF PSF against the target RF PSF on their B-mode images.
/// sidelobe_ratio is that of the prediction.
MetricsReport evaluate_psf(const RealPatch& pred_rf, const RealPatch& target_rf, double dr = 60.0);

/// Field-wise mean. Empty input gives a zero report.
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

}  // namespace psflab

#endif  // PSFLAB_METRICS_HPP
