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

#include "psflab/core.hpp"

#include <cmath>
#include <sstream>

namespace psflab {

const char* to_string(ConfigErrorCode code) {
  switch (code) {
    case ConfigErrorCode::NElements: return "n_elements";
    case ConfigErrorCode::Pitch: return "pitch";
    case ConfigErrorCode::CenterFrequency: return "fc";
    case ConfigErrorCode::FractionalBandwidth: return "fractional_bandwidth";
    case ConfigErrorCode::SoundSpeed: return "c";
    case ConfigErrorCode::FNumber: return "f_number";
    case ConfigErrorCode::Depth: return "depth";
    case ConfigErrorCode::MaxPhaseError: return "max_phase_error";
    case ConfigErrorCode::CorrLength: return "corr_length";
    case ConfigErrorCode::DynamicRange: return "dynamic_range";
    case ConfigErrorCode::UnknownKey: return "unknown_key";
    case ConfigErrorCode::Syntax: return "syntax";
  }
  return "unknown";
}

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> SimConfig::validate() const {
  using C = ConfigErrorCode;
  if (n_elements < 2) throw ConfigError(C::NElements, "need at least 2 elements, got " + std::to_string(n_elements));
  if (!positive_finite(pitch)) throw ConfigError(C::Pitch, "must be > 0, got " + fmt(pitch));
  if (!positive_finite(fc)) throw ConfigError(C::CenterFrequency, "must be > 0, got " + fmt(fc));
  if (!std::isfinite(fractional_bandwidth) || fractional_bandwidth <= 0.0 || fractional_bandwidth >= 1.0)
    throw ConfigError(C::FractionalBandwidth, "must lie in (0, 1), got " + fmt(fractional_bandwidth));
  if (!positive_finite(c)) throw ConfigError(C::SoundSpeed, "must be > 0, got " + fmt(c));
  if (!positive_finite(f_number)) throw ConfigError(C::FNumber, "must be > 0, got " + fmt(f_number));
  if (!positive_finite(depth)) throw ConfigError(C::Depth, "must be > 0, got " + fmt(depth));
  if (!std::isfinite(max_phase_error) || max_phase_error < 0.0)
    throw ConfigError(C::MaxPhaseError, "must be >= 0, got " + fmt(max_phase_error));
  if (!positive_finite(corr_length)) throw ConfigError(C::CorrLength, "must be > 0, got " + fmt(corr_length));
  if (!positive_finite(dynamic_range)) throw ConfigError(C::DynamicRange, "must be > 0, got " + fmt(dynamic_range));

  std::vector<std::string> warnings;
  if (fc < 3e6 || fc > 7.5e6)
    warnings.push_back("fc = " + fmt(fc * 1e-6) + " MHz is outside the 3-7.5 MHz range");
  if (max_phase_error > kPi / 2.0 + 1e-12)
    warnings.push_back("max_phase_error = " + fmt(max_phase_error) + " rad exceeds pi/2");
  return warnings;
}

double wavelength(double c, double fc) {
  if (!positive_finite(c) || !positive_finite(fc))
    throw InvalidArgument("wavelength: c and fc must be positive");
  return c / fc;
}

Index Grid::col_of(double xv) const { return static_cast<Index>(std::llround((xv - x0) / dx)); }
Index Grid::row_of(double zv) const { return static_cast<Index>(std::llround((zv - z0) / dz)); }

bool Grid::same_spacing(const Grid& other) const {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  return close(dx, other.dx) && close(dz, other.dz);
}

Grid grid_from_config(const SimConfig& cfg, Index nx, Index nz, GridSpacing spacing) {
  cfg.validate();
  if (nx <= 0 || nz <= 0) throw InvalidArgument("grid_from_config: pixel counts must be positive");
  Grid g;
  g.nx = nx;
  g.nz = nz;
  g.wavelength = wavelength(cfg.c, cfg.fc);
  g.sound_speed = cfg.c;
  g.dx = g.wavelength / spacing.lateral_divisor;
  g.dz = g.wavelength / spacing.axial_divisor;
  g.x0 = -static_cast<double>(nx / 2) * g.dx;
  g.z0 = cfg.depth - static_cast<double>(nz / 2) * g.dz;
  return g;
}

Grid desk_grid(const SimConfig& cfg) { return grid_from_config(cfg, 64, 64, GridSpacing::desk()); }

const char* to_string(RealKind kind) {
  switch (kind) {
    case RealKind::RF: return "rf";
    case RealKind::Envelope: return "envelope";
    case RealKind::Decibel: return "db";
    case RealKind::Scatterer: return "scatterer";
  }
  return "unknown";
}

const char* to_string(ComplexKind kind) {
  switch (kind) {
    case ComplexKind::Baseband: return "baseband";
    case ComplexKind::KSpace: return "kspace";
  }
  return "unknown";
}

void check_patch(const RealPatch& patch, double dynamic_range) {
  if (patch.data.rows() != patch.grid.nz || patch.data.cols() != patch.grid.nx)
    throw InvalidArgument("patch data shape does not match its grid");
  if (!patch.data.allFinite()) throw InvalidArgument("patch contains non-finite samples");
  if (patch.kind == RealKind::Decibel &&
      (patch.data.minCoeff() < 0.0 || patch.data.maxCoeff() > dynamic_range))
    throw InvalidArgument("decibel patch leaves [0, dynamic_range]");
}

void check_patch(const ComplexPatch& patch) {
  if (patch.data.rows() != patch.grid.nz || patch.data.cols() != patch.grid.nx)
    throw InvalidArgument("patch data shape does not match its grid");
  if (!patch.data.real().allFinite() || !patch.data.imag().allFinite())
    throw InvalidArgument("patch contains non-finite samples");
}

}  // namespace psflab
