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

#include "psflab/io/pgm.hpp"

#include <cmath>
#include <string>

#include "psflab/io/tensor_file.hpp"

namespace psflab::io {

std::vector<std::uint8_t> encode_pgm(const ImageR& db, double dr) {
  if (!(dr > 0.0)) throw InvalidArgument("encode_pgm: dynamic range must be positive");
  const std::string header = "P5\n" + std::to_string(db.cols()) + " " + std::to_string(db.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(db.size()));
  for (Index r = 0; r < db.rows(); ++r)
    for (Index c = 0; c < db.cols(); ++c) {
      const double v = std::clamp(std::round(255.0 * db(r, c) / dr), 0.0, 255.0);
      out.push_back(static_cast<std::uint8_t>(v));
    }
  return out;
}

void write_pgm(const std::filesystem::path& path, const ImageR& db, double dr) { write_bytes(path, encode_pgm(db, dr)); }

}  // namespace psflab::io
