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

#ifndef PSFLAB_ABERRATION_HPP
#define PSFLAB_ABERRATION_HPP

#include <cstdint>

#include "psflab/core.hpp"

namespace psflab {

/// Near-field phase screen realized as one time delay per array element.
/// The same delay is applied on transmit and on receive.
struct AberrationProfile {
  Eigen::VectorXd delays;  // seconds, one per element
  double max_phase_error = 0.0;
  double corr_length = 0.0;
  std::uint64_t seed = 0;

  /// Phase at frequency fc in radians: 2 pi fc delay.
  Eigen::VectorXd phases(double fc) const;
};

/// Gaussian-windowed cosine. The envelope width follows from the fractional
/// bandwidth B taken as the -6 dB (FWHM) width of the spectrum:
///   sigma_f = B fc / (2 sqrt(2 ln 2)),   sigma_t = 1 / (2 pi sigma_f)
struct Pulse {
  double fc = 0.0;
  double sigma_t = 0.0;

  static Pulse from_bandwidth(double fc, double fractional_bandwidth);
  double operator()(double t) const;
};

/// Lateral element centers, symmetric about x = 0.
Eigen::VectorXd element_positions(const SimConfig& cfg);

/// Hann weight of an element at lateral offset u from the aperture center for
/// an aperture of width w. Zero outside |u| < w / 2.
double hann_apodization(double u, double w);

/// i.i.d. N(0, 1) draws at the element positions, smoothed with a Gaussian
/// kernel of standard deviation corr_length / 2 (half-sample reflective ends),
/// then scaled so that max |phase| equals cfg.max_phase_error.
///
/// With that kernel the screen autocorrelation is exp(-lag^2 / corr_length^2),
/// so corr_length is the 1/e lag.
AberrationProfile generate_phase_screen(const SimConfig& cfg, std::uint64_t seed);

/// Profile with every delay zero.
AberrationProfile zero_profile(const SimConfig& cfg);

/// Two-way synthetic-transmit-aperture PSF of a point target at (0, cfg.depth).
///
/// Each pixel is dynamically focused in transmit and receive with a Hann
/// apodized aperture of width z / f_number centered above the pixel:
///
///   h(x, z) = sum_i sum_j a_i a_j p(tau_ij)
///   tau_ij  = [r_i(x0, z0) + r_j(x0, z0) - r_i(x, z) - r_j(x, z)] / c + e_i + e_j
///
/// No element directivity or attenuation. Output is normalized to unit peak
/// absolute value. Throws SimulationError when a pixel has no active element.
RealPatch simulate_psf(const SimConfig& cfg, const AberrationProfile& profile, const Grid& grid);

}  // namespace psflab

#endif  // PSFLAB_ABERRATION_HPP
