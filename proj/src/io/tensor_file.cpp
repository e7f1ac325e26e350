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

#include "psflab/io/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace psflab::io {
namespace {

constexpr std::uint8_t kMagic[4] = {'U', 'P', 'S', 'F'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

std::size_t TensorData::sample_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(n));
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_tensor(const TensorData& t) {
  const std::size_t per = t.dtype == DType::C32 ? 2 : 1;
  if (t.values.size() != t.sample_count() * per)
    throw InvalidArgument("encode_tensor: value count does not match dims");
  std::vector<std::uint8_t> out;
  out.reserve(20 + 4 * t.dims.size() + 4 * t.values.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kTensorFileVersion);
  put_u32(out, static_cast<std::uint32_t>(t.dtype));
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  for (float v : t.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  put_u32(out, crc32(out));
  return out;
}

TensorData decode_tensor(std::span<const std::uint8_t> b, const std::string& origin) {
  if (b.size() < 20) throw FormatError(origin, "truncated tensor file");
  if (std::memcmp(b.data(), kMagic, 4) != 0) throw FormatError(origin, "bad magic");
  const std::uint32_t stored_crc = get_u32(b, b.size() - 4);
  if (crc32(b.first(b.size() - 4)) != stored_crc) throw FormatError(origin, "CRC mismatch");
  const std::uint32_t version = get_u32(b, 4);
  if (version != kTensorFileVersion)
    throw FormatError(origin, "unsupported version " + std::to_string(version));
  TensorData t;
  const std::uint32_t dtype = get_u32(b, 8);
  if (dtype > 1) throw FormatError(origin, "unknown dtype " + std::to_string(dtype));
  t.dtype = static_cast<DType>(dtype);
  const std::uint32_t ndim = get_u32(b, 12);
  std::size_t at = 16;
  if (b.size() < at + 4 * static_cast<std::size_t>(ndim) + 4) throw FormatError(origin, "truncated header");
  for (std::uint32_t i = 0; i < ndim; ++i, at += 4) t.dims.push_back(get_u32(b, at));
  const std::size_t nvals = t.sample_count() * (t.dtype == DType::C32 ? 2 : 1);
  if (b.size() - 4 - at != 4 * nvals) throw FormatError(origin, "payload length does not match dims");
  t.values.resize(nvals);
  for (std::size_t i = 0; i < nvals; ++i, at += 4) t.values[i] = std::bit_cast<float>(get_u32(b, at));
  return t;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string(), "read failed");
  return bytes;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_tensor_file(const std::filesystem::path& path, const TensorData& t) { write_bytes(path, encode_tensor(t)); }

TensorData read_tensor_file(const std::filesystem::path& path) { return decode_tensor(read_bytes(path), path.string()); }

TensorData from_image(const ImageR& img) {
  TensorData t;
  t.dims = {static_cast<std::uint32_t>(img.rows()), static_cast<std::uint32_t>(img.cols())};
  t.values.resize(static_cast<std::size_t>(img.size()));
  for (Index r = 0, k = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c, ++k) t.values[static_cast<std::size_t>(k)] = static_cast<float>(img(r, c));
  return t;
}

TensorData from_image(const ImageC& img) {
  TensorData t;
  t.dtype = DType::C32;
  t.dims = {static_cast<std::uint32_t>(img.rows()), static_cast<std::uint32_t>(img.cols())};
  t.values.reserve(static_cast<std::size_t>(2 * img.size()));
  for (Index r = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c) {
      t.values.push_back(static_cast<float>(img(r, c).real()));
      t.values.push_back(static_cast<float>(img(r, c).imag()));
    }
  return t;
}

TensorData from_vector(const Eigen::VectorXd& v) {
  TensorData t;
  t.dims = {static_cast<std::uint32_t>(v.size())};
  for (Index i = 0; i < v.size(); ++i) t.values.push_back(static_cast<float>(v[i]));
  return t;
}

ImageR to_real_image(const TensorData& t) {
  if (t.dtype != DType::F32 || t.dims.size() != 2) throw InvalidArgument("to_real_image: expected a 2D f32 tensor");
  ImageR img(t.dims[0], t.dims[1]);
  for (Index r = 0, k = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c, ++k) img(r, c) = t.values[static_cast<std::size_t>(k)];
  return img;
}

ImageC to_complex_image(const TensorData& t) {
  if (t.dtype != DType::C32 || t.dims.size() != 2)
    throw InvalidArgument("to_complex_image: expected a 2D complex tensor");
  ImageC img(t.dims[0], t.dims[1]);
  for (Index r = 0, k = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c, k += 2)
      img(r, c) = {t.values[static_cast<std::size_t>(k)], t.values[static_cast<std::size_t>(k + 1)]};
  return img;
}

}  // namespace psflab::io
