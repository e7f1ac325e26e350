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

#ifndef PSFLAB_IO_PGM_HPP
#define PSFLAB_IO_PGM_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "psflab/core.hpp"

namespace psflab::io {

/// Binary PGM (P5), 8 bit. Pixel = round(255 * dB / dr), clamped to [0, 255].
std::vector<std::uint8_t> encode_pgm(const ImageR& db, double dr = 60.0);
void write_pgm(const std::filesystem::path& path, const ImageR& db, double dr = 60.0);

}  // namespace psflab::io

#endif  // PSFLAB_IO_PGM_HPP
