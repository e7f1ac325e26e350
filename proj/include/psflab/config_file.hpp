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

#ifndef PSFLAB_CONFIG_FILE_HPP
#define PSFLAB_CONFIG_FILE_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "psflab/core.hpp"

namespace psflab {

/// Parses `key = value` lines. Keys are the SimConfig field names; `#` starts a
/// comment. A value may carry a unit suffix that is converted to SI:
///
///   fc = 5 MHz            pitch = 0.3 mm          c = 1540 m/s
///   max_phase_error = 0.5 pi                      dynamic_range = 60 dB
///
/// Missing keys keep their defaults. The result is validated.
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::filesystem::path& path);

/// Overrides fields from environment variables named prefix + upper-case key,
/// e.g. PSFLAB_FC="3 MHz". Values use the config-file syntax.
void apply_env_overrides(SimConfig& cfg, const std::string& prefix = "PSFLAB_");

/// Sets one field from its textual form. Throws ConfigError.
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text form (SI, fixed key order). parse_config(to_config_text(c)) == c.
std::string to_config_text(const SimConfig& cfg);

}  // namespace psflab

#endif  // PSFLAB_CONFIG_FILE_HPP
