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

#ifndef PSFLAB_IO_TENSOR_FILE_HPP
#define PSFLAB_IO_TENSOR_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "psflab/core.hpp"

namespace psflab::io {

// Binary tensor container (.ut). All integers are little-endian u32.
//
//   offset  size        field
//   0       4           magic "UPSF"
//   4       4           version (1)
//   8       4           dtype: 0 = f32, 1 = complex f32 (re, im interleaved)
//   12      4           ndim
//   16      4 * ndim    dims, outermost first
//   ...     payload     row-major little-endian IEEE-754 f32 samples
//   end-4   4           CRC-32 (zlib polynomial) of every preceding byte
//
// Readers reject a bad magic, any other version, a payload whose length
// disagrees with the dims, and a CRC mismatch.

inline constexpr std::uint32_t kTensorFileVersion = 1;

enum class DType : std::uint32_t { F32 = 0, C32 = 1 };

struct TensorData {
  DType dtype = DType::F32;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;  // complex data interleaved, 2 floats per sample

  std::size_t sample_count() const;
  bool operator==(const TensorData&) const = default;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_tensor(const TensorData& t);
TensorData decode_tensor(std::span<const std::uint8_t> bytes, const std::string& origin = "<memory>");

void write_tensor_file(const std::filesystem::path& path, const TensorData& t);
TensorData read_tensor_file(const std::filesystem::path& path);

TensorData from_image(const ImageR& img);
TensorData from_image(const ImageC& img);
TensorData from_vector(const Eigen::VectorXd& v);
ImageR to_real_image(const TensorData& t);
ImageC to_complex_image(const TensorData& t);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace psflab::io

#endif  // PSFLAB_IO_TENSOR_FILE_HPP
