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

#include "psflab/aberration.hpp"

#include <cmath>
#include <vector>

#include "psflab/rng.hpp"

namespace psflab {

Eigen::VectorXd AberrationProfile::phases(double fc) const { return (2.0 * kPi * fc) * delays; }

Pulse Pulse::from_bandwidth(double fc, double fractional_bandwidth) {
  if (!(fc > 0.0) || !(fractional_bandwidth > 0.0)) throw InvalidArgument("Pulse: fc and bandwidth must be positive");
  const double sigma_f = fractional_bandwidth * fc / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return Pulse{fc, 1.0 / (2.0 * kPi * sigma_f)};
}

double Pulse::operator()(double t) const {
  const double u = t / sigma_t;
  return std::exp(-0.5 * u * u) * std::cos(2.0 * kPi * fc * t);
}

Eigen::VectorXd element_positions(const SimConfig& cfg) {
  const double mid = 0.5 * static_cast<double>(cfg.n_elements - 1);
  return (Eigen::VectorXd::LinSpaced(cfg.n_elements, 0.0, cfg.n_elements - 1).array() - mid) * cfg.pitch;
}

double hann_apodization(double u, double w) {
  if (!(w > 0.0) || std::abs(u) >= 0.5 * w) return 0.0;
  return 0.5 * (1.0 + std::cos(2.0 * kPi * u / w));
}

AberrationProfile zero_profile(const SimConfig& cfg) {
  AberrationProfile p;
  p.delays = Eigen::VectorXd::Zero(cfg.n_elements);
  p.corr_length = cfg.corr_length;
  return p;
}

AberrationProfile generate_phase_screen(const SimConfig& cfg, std::uint64_t seed) {
  if (cfg.max_phase_error < 0.0) throw InvalidArgument("generate_phase_screen: max_phase_error must be >= 0");
  cfg.validate();

  AberrationProfile profile = zero_profile(cfg);
  profile.max_phase_error = cfg.max_phase_error;
  profile.seed = seed;
  const Index n = cfg.n_elements;

  Rng rng(seed);
  Eigen::VectorXd white(n);
  for (Index i = 0; i < n; ++i) white[i] = rng.normal();

  // Kernel in element units.
  const double sigma = 0.5 * cfg.corr_length / cfg.pitch;
  const Index half = std::max<Index>(1, static_cast<Index>(std::ceil(4.0 * sigma)));
  Eigen::VectorXd kernel(2 * half + 1);
  for (Index k = -half; k <= half; ++k) kernel[k + half] = std::exp(-0.5 * (k / sigma) * (k / sigma));
  kernel /= kernel.sum();

  // Half-sample symmetric reflection: index -1 -> 0, n -> n-1.
  auto reflect = [n](Index i) {
    const Index period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  };

  Eigen::VectorXd phase(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index k = -half; k <= half; ++k) acc += kernel[k + half] * white[reflect(i + k)];
    phase[i] = acc;
  }

  if (cfg.max_phase_error == 0.0) return profile;
  const double peak = phase.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) return profile;
  phase *= cfg.max_phase_error / peak;
  profile.delays = phase / (2.0 * kPi * cfg.fc);
  return profile;
}

RealPatch simulate_psf(const SimConfig& cfg, const AberrationProfile& profile, const Grid& grid) {
  cfg.validate();
  if (profile.delays.size() != cfg.n_elements)
    throw InvalidArgument("simulate_psf: profile length does not match n_elements");

  const Eigen::VectorXd xe = element_positions(cfg);
  const Pulse pulse = Pulse::from_bandwidth(cfg.fc, cfg.fractional_bandwidth);
  const double inv_two_var = 0.5 / (pulse.sigma_t * pulse.sigma_t);
  const double omega = 2.0 * kPi * cfg.fc;

  // Distance from each element to the target.
  const Eigen::ArrayXd r_target = (xe.array().square() + cfg.depth * cfg.depth).sqrt();

  RealPatch out(grid, RealKind::RF);
  std::vector<double> weight, delay;
  weight.reserve(static_cast<std::size_t>(cfg.n_elements));
  delay.reserve(static_cast<std::size_t>(cfg.n_elements));

  for (Index row = 0; row < grid.nz; ++row) {
    const double z = grid.z(row);
    const double aperture = z / cfg.f_number;
    for (Index col = 0; col < grid.nx; ++col) {
      const double x = grid.x(col);
      weight.clear();
      delay.clear();
      for (Index i = 0; i < cfg.n_elements; ++i) {
        const double a = hann_apodization(xe[i] - x, aperture);
        if (a <= 0.0) continue;
        const double r = std::hypot(xe[i] - x, z);
        weight.push_back(a);
        delay.push_back((r_target[i] - r) / cfg.c + profile.delays[i]);
      }
      if (weight.empty())
        throw SimulationError("simulate_psf: empty active aperture at pixel (" + std::to_string(row) + ", " +
                              std::to_string(col) + "); depth too small for the f-number");

      // Symmetric in (i, j): diagonal once, off-diagonal twice.
      double acc = 0.0;
      const std::size_t m = weight.size();
      for (std::size_t i = 0; i < m; ++i) {
        const double ti = 2.0 * delay[i];
        acc += weight[i] * weight[i] * std::exp(-ti * ti * inv_two_var) * std::cos(omega * ti);
        double off = 0.0;
        for (std::size_t j = i + 1; j < m; ++j) {
          const double t = delay[i] + delay[j];
          off += weight[j] * std::exp(-t * t * inv_two_var) * std::cos(omega * t);
        }
        acc += 2.0 * weight[i] * off;
      }
      out.data(row, col) = acc;
    }
  }

  const double peak = out.data.abs().maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) throw SimulationError("simulate_psf: degenerate PSF");
  out.data /= peak;
  return out;
}

}  // namespace psflab
