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

#ifndef PSFLAB_CORE_HPP
#define PSFLAB_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace psflab {

using Index = Eigen::Index;

/// Row-major 2D sample grid. Rows are the axial (z) direction, columns lateral (x).
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageR = Image<double>;
using ImageC = Image<std::complex<double>>;

constexpr double kPi = 3.14159265358979323846;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// One code per SimConfig field so callers can tell which value was rejected.
enum class ConfigErrorCode {
  NElements = 1,
  Pitch,
  CenterFrequency,
  FractionalBandwidth,
  SoundSpeed,
  FNumber,
  Depth,
  MaxPhaseError,
  CorrLength,
  DynamicRange,
  UnknownKey,
  Syntax,
};

const char* to_string(ConfigErrorCode code);

class ConfigError : public InvalidArgument {
 public:
  ConfigError(ConfigErrorCode code, const std::string& what)
      : InvalidArgument(std::string(to_string(code)) + ": " + what), code_(code) {}
  ConfigErrorCode code() const noexcept { return code_; }

 private:
  ConfigErrorCode code_;
};

/// Linear-array imaging setup. All values are SI (m, s, Hz, rad) and dB.
/// Defaults are the midpoints of the supported parameter ranges.
struct SimConfig {
  int n_elements = 128;
  double pitch = 0.3e-3;
  double fc = 5e6;
  double fractional_bandwidth = 0.6;
  double c = 1540.0;
  double f_number = 2.0;
  double depth = 25e-3;
  double max_phase_error = 0.0;  // radians at fc
  double corr_length = 5e-3;
  double dynamic_range = 60.0;

  /// Throws ConfigError on the first out-of-range field. Values that are
  /// accepted but outside the recommended ranges produce warnings.
  std::vector<std::string> validate() const;

  bool operator==(const SimConfig&) const = default;
};

double wavelength(double c, double fc);

/// Sample intervals expressed as fractions of a wavelength: dx = lambda / lateral_divisor.
struct GridSpacing {
  double lateral_divisor = 32.0;
  double axial_divisor = 16.0;

  /// lambda/32 lateral, lambda/16 axial (256 x 256 reference patches).
  static constexpr GridSpacing paper() { return {32.0, 16.0}; }
  /// lambda/4 lateral, lambda/16 axial. At 64 x 64 this spans 16 lambda x 4 lambda,
  /// wide enough to hold the mainlobe and the near sidelobes.
  static constexpr GridSpacing desk() { return {4.0, 16.0}; }
};

struct Grid {
  Index nx = 0;
  Index nz = 0;
  double dx = 0.0;
  double dz = 0.0;
  double x0 = 0.0;  // lateral coordinate of column 0
  double z0 = 0.0;  // axial coordinate of row 0
  double wavelength = 0.0;
  double sound_speed = 1540.0;

  double x(Index col) const { return x0 + static_cast<double>(col) * dx; }
  double z(Index row) const { return z0 + static_cast<double>(row) * dz; }
  Index col_of(double x) const;
  Index row_of(double z) const;
  Index center_col() const { return nx / 2; }
  Index center_row() const { return nz / 2; }
  double width() const { return static_cast<double>(nx) * dx; }
  double height() const { return static_cast<double>(nz) * dz; }
  Index size() const { return nx * nz; }

  bool same_spacing(const Grid& other) const;
  bool operator==(const Grid&) const = default;
};

/// Grid whose center pixel (nz/2, nx/2) sits on the point target at (0, cfg.depth).
Grid grid_from_config(const SimConfig& cfg, Index nx, Index nz,
                      GridSpacing spacing = GridSpacing::paper());

/// 64 x 64 training grid.
Grid desk_grid(const SimConfig& cfg);

enum class RealKind { RF, Envelope, Decibel, Scatterer };
enum class ComplexKind { Baseband, KSpace };

const char* to_string(RealKind kind);
const char* to_string(ComplexKind kind);

template <typename Kind, typename Scalar>
struct Patch {
  Grid grid;
  Kind kind{};
  Image<Scalar> data;

  Patch() = default;
  Patch(const Grid& g, Kind k) : grid(g), kind(k), data(Image<Scalar>::Zero(g.nz, g.nx)) {}
  Patch(const Grid& g, Kind k, Image<Scalar> d) : grid(g), kind(k), data(std::move(d)) {}
};

using RealPatch = Patch<RealKind, double>;
using ComplexPatch = Patch<ComplexKind, std::complex<double>>;

/// Throws InvalidArgument if the data shape disagrees with the grid, if any
/// sample is non-finite, or if a Decibel patch leaves [0, dynamic_range].
void check_patch(const RealPatch& patch, double dynamic_range = 60.0);
void check_patch(const ComplexPatch& patch);

}  // namespace psflab

#endif  // PSFLAB_CORE_HPP
