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

#ifndef PSFLAB_SERIALIZE_HPP
#define PSFLAB_SERIALIZE_HPP

#include <json.hpp>

#include "psflab/core.hpp"

namespace psflab {

void to_json(nlohmann::json& j, const SimConfig& cfg);
void from_json(const nlohmann::json& j, SimConfig& cfg);
void to_json(nlohmann::json& j, const Grid& grid);
void from_json(const nlohmann::json& j, Grid& grid);

}  // namespace psflab

#endif  // PSFLAB_SERIALIZE_HPP
