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

#include "psflab/serialize.hpp"

namespace psflab {

void to_json(nlohmann::json& j, const SimConfig& cfg) {
  j = nlohmann::json{{"n_elements", cfg.n_elements},
                     {"pitch", cfg.pitch},
                     {"fc", cfg.fc},
                     {"fractional_bandwidth", cfg.fractional_bandwidth},
                     {"c", cfg.c},
                     {"f_number", cfg.f_number},
                     {"depth", cfg.depth},
                     {"max_phase_error", cfg.max_phase_error},
                     {"corr_length", cfg.corr_length},
                     {"dynamic_range", cfg.dynamic_range}};
}

void from_json(const nlohmann::json& j, SimConfig& cfg) {
  j.at("n_elements").get_to(cfg.n_elements);
  j.at("pitch").get_to(cfg.pitch);
  j.at("fc").get_to(cfg.fc);
  j.at("fractional_bandwidth").get_to(cfg.fractional_bandwidth);
  j.at("c").get_to(cfg.c);
  j.at("f_number").get_to(cfg.f_number);
  j.at("depth").get_to(cfg.depth);
  j.at("max_phase_error").get_to(cfg.max_phase_error);
  j.at("corr_length").get_to(cfg.corr_length);
  j.at("dynamic_range").get_to(cfg.dynamic_range);
}

void to_json(nlohmann::json& j, const Grid& g) {
  j = nlohmann::json{{"nx", g.nx}, {"nz", g.nz}, {"dx", g.dx}, {"dz", g.dz}, {"x0", g.x0},
                     {"z0", g.z0}, {"wavelength", g.wavelength}, {"sound_speed", g.sound_speed}};
}

void from_json(const nlohmann::json& j, Grid& g) {
  j.at("nx").get_to(g.nx);
  j.at("nz").get_to(g.nz);
  j.at("dx").get_to(g.dx);
  j.at("dz").get_to(g.dz);
  j.at("x0").get_to(g.x0);
  j.at("z0").get_to(g.z0);
  j.at("wavelength").get_to(g.wavelength);
  j.at("sound_speed").get_to(g.sound_speed);
}

}  // namespace psflab
