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

#include "psflab/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace psflab {
namespace {

enum class Dim { Count, Length, Frequency, Speed, Ratio, Phase, Level };

struct Field {
  const char* key;
  Dim dim;
  ConfigErrorCode code;
};

constexpr Field kFields[] = {
    {"n_elements", Dim::Count, ConfigErrorCode::NElements},
    {"pitch", Dim::Length, ConfigErrorCode::Pitch},
    {"fc", Dim::Frequency, ConfigErrorCode::CenterFrequency},
    {"fractional_bandwidth", Dim::Ratio, ConfigErrorCode::FractionalBandwidth},
    {"c", Dim::Speed, ConfigErrorCode::SoundSpeed},
    {"f_number", Dim::Ratio, ConfigErrorCode::FNumber},
    {"depth", Dim::Length, ConfigErrorCode::Depth},
    {"max_phase_error", Dim::Phase, ConfigErrorCode::MaxPhaseError},
    {"corr_length", Dim::Length, ConfigErrorCode::CorrLength},
    {"dynamic_range", Dim::Level, ConfigErrorCode::DynamicRange},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double unit_scale(Dim dim, std::string_view unit, ConfigErrorCode code) {
  if (unit.empty()) return 1.0;
  struct U {
    Dim dim;
    const char* name;
    double scale;
  };
  static constexpr U kUnits[] = {
      {Dim::Length, "m", 1.0},        {Dim::Length, "mm", 1e-3},     {Dim::Length, "um", 1e-6},
      {Dim::Frequency, "Hz", 1.0},    {Dim::Frequency, "kHz", 1e3},  {Dim::Frequency, "MHz", 1e6},
      {Dim::Speed, "m/s", 1.0},       {Dim::Phase, "rad", 1.0},      {Dim::Phase, "pi", kPi},
      {Dim::Level, "dB", 1.0},
  };
  for (const auto& u : kUnits)
    if (u.dim == dim && unit == u.name) return u.scale;
  throw ConfigError(code, "unsupported unit '" + std::string(unit) + "'");
}

const Field& find_field(std::string_view key) {
  for (const auto& f : kFields)
    if (key == f.key) return f;
  throw ConfigError(ConfigErrorCode::UnknownKey, "unknown key '" + std::string(key) + "'");
}

}  // namespace

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view text) {
  const Field& field = find_field(trim(key));
  text = trim(text);
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number);
  if (ec != std::errc{}) throw ConfigError(ConfigErrorCode::Syntax, "cannot parse '" + std::string(text) + "'");
  std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)));
  const double value = number * unit_scale(field.dim, unit, field.code);

  switch (field.code) {
    case ConfigErrorCode::NElements:
      if (value != std::floor(value)) throw ConfigError(field.code, "must be an integer");
      cfg.n_elements = static_cast<int>(value);
      break;
    case ConfigErrorCode::Pitch: cfg.pitch = value; break;
    case ConfigErrorCode::CenterFrequency: cfg.fc = value; break;
    case ConfigErrorCode::FractionalBandwidth: cfg.fractional_bandwidth = value; break;
    case ConfigErrorCode::SoundSpeed: cfg.c = value; break;
    case ConfigErrorCode::FNumber: cfg.f_number = value; break;
    case ConfigErrorCode::Depth: cfg.depth = value; break;
    case ConfigErrorCode::MaxPhaseError: cfg.max_phase_error = value; break;
    case ConfigErrorCode::CorrLength: cfg.corr_length = value; break;
    case ConfigErrorCode::DynamicRange: cfg.dynamic_range = value; break;
    default: break;
  }
}

SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(ConfigErrorCode::Syntax, "line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, view.substr(0, eq), view.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config file");
  return parse_config(in);
}

void apply_env_overrides(SimConfig& cfg, const std::string& prefix) {
  for (const auto& f : kFields) {
    std::string name = prefix + f.key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (const char* v = std::getenv(name.c_str())) set_config_value(cfg, f.key, v);
  }
  cfg.validate();
}

std::string to_config_text(const SimConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n_elements = " << cfg.n_elements << '\n'
     << "pitch = " << cfg.pitch << '\n'
     << "fc = " << cfg.fc << '\n'
     << "fractional_bandwidth = " << cfg.fractional_bandwidth << '\n'
     << "c = " << cfg.c << '\n'
     << "f_number = " << cfg.f_number << '\n'
     << "depth = " << cfg.depth << '\n'
     << "max_phase_error = " << cfg.max_phase_error << '\n'
     << "corr_length = " << cfg.corr_length << '\n'
     << "dynamic_range = " << cfg.dynamic_range << '\n';
  return os.str();
}

}  // namespace psflab
