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

#include <doctest.h>

#include <cstring>

#include "psflab/io/hash.hpp"
#include "psflab/io/pgm.hpp"
#include "psflab/io/tensor_file.hpp"
#include "support/testing.hpp"

using namespace psflab;
using namespace psflab::io;
using namespace psflab::testing;

namespace {

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void put_le(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void reseal(std::vector<std::uint8_t>& b) {
  put_le(b, b.size() - 4, crc32(std::span(b).first(b.size() - 4)));
}

}  // namespace

TEST_CASE("checksums and hashes: known vectors") {
  CHECK(crc32(bytes_of("123456789")) == 0xcbf43926u);
  CHECK(crc32_hex(bytes_of("123456789")) == "cbf43926");
  CHECK(sha1_hex(std::string("abc")) == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex(std::string()) == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  // `printf 'hello\n' | git hash-object --stdin`
  CHECK(git_blob_hash(bytes_of("hello\n")) == "ce013625030ba8dba906f756967f9e9ca394464a");
  TempDir tmp("hash");
  write_text(tmp.path() / "h.txt", "hello\n");
  CHECK(git_blob_hash(tmp.path() / "h.txt") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("tensor file: bit-exact round trip on random payloads") {
  Rng rng(51);
  TempDir tmp("tensor");
  for (int trial = 0; trial < 25; ++trial) {
    TensorData t;
    t.dtype = rng.below(2) ? DType::C32 : DType::F32;
    const std::size_t ndim = rng.below(4);
    for (std::size_t i = 0; i < ndim; ++i) t.dims.push_back(static_cast<std::uint32_t>(1 + rng.below(6)));
    const std::size_t n = t.sample_count() * (t.dtype == DType::C32 ? 2 : 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto bits = static_cast<std::uint32_t>(rng.next());
      float f;
      std::memcpy(&f, &bits, sizeof f);
      t.values.push_back(std::isnan(f) ? -0.0f : f);
    }
    const auto enc = encode_tensor(t);
    CHECK(decode_tensor(enc) == t);
    write_tensor_file(tmp.path() / "t.ut", t);
    const TensorData back = read_tensor_file(tmp.path() / "t.ut");
    REQUIRE(back.values.size() == t.values.size());
    CHECK(std::memcmp(back.values.data(), t.values.data(), 4 * t.values.size()) == 0);
    CHECK(back.dims == t.dims);
  }
}

TEST_CASE("tensor file: images and vectors") {
  Rng rng(52);
  const ImageR r = random_image(5, 7, rng);
  const ImageR rb = to_real_image(decode_tensor(encode_tensor(from_image(r))));
  CHECK((rb - r.cast<float>().cast<double>()).abs().maxCoeff() == 0.0);
  const ImageC c = r.cast<std::complex<double>>() * std::complex<double>(0.5, -2.0);
  CHECK((to_complex_image(decode_tensor(encode_tensor(from_image(c)))) - c).abs().maxCoeff() < 1e-5);
  CHECK_THROWS_AS(to_complex_image(from_image(r)), InvalidArgument);
  CHECK_THROWS_AS(to_real_image(from_image(c)), InvalidArgument);
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(9, -1, 1);
  CHECK(from_vector(v).dims == std::vector<std::uint32_t>{9});
  TensorData bad;
  bad.dims = {2, 2};
  bad.values = {1, 2, 3};
  CHECK_THROWS_AS(encode_tensor(bad), InvalidArgument);
}

TEST_CASE("tensor file: corrupt inputs are rejected") {
  const auto good = encode_tensor(from_image(ImageR(ImageR::Ones(3, 3))));
  auto reason = [](std::vector<std::uint8_t> b) -> std::string {
    try {
      decode_tensor(b, "x.ut");
    } catch (const FormatError& e) {
      return e.what();
    }
    return "accepted";
  };
  CHECK(reason(good) == "accepted");
  CHECK(reason(std::vector<std::uint8_t>(good.begin(), good.begin() + 10)).find("truncated") != std::string::npos);

  auto magic = good;
  magic[0] = 'X';
  CHECK(reason(magic).find("magic") != std::string::npos);

  auto flipped = good;
  flipped[24] ^= 1;
  CHECK(reason(flipped).find("CRC") != std::string::npos);

  auto version = good;
  put_le(version, 4, kTensorFileVersion + 1);
  reseal(version);
  CHECK(reason(version).find("version") != std::string::npos);

  auto dtype = good;
  put_le(dtype, 8, 7);
  reseal(dtype);
  CHECK(reason(dtype).find("dtype") != std::string::npos);

  auto dims = good;
  put_le(dims, 16, 4);  // 4 x 3 declared, 3 x 3 stored
  reseal(dims);
  CHECK(reason(dims).find("payload") != std::string::npos);

  CHECK_THROWS_AS(read_tensor_file("/nonexistent/psflab.ut"), IoError);
}

TEST_CASE("pgm encoding") {
  ImageR db(2, 3);
  db << 0.0, 30.0, 60.0, -5.0, 59.9, 75.0;
  const auto pgm = encode_pgm(db, 60.0);
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(pgm.size() == header.size() + 6);
  CHECK(std::string(pgm.begin(), pgm.begin() + header.size()) == header);
  const std::vector<std::uint8_t> px(pgm.begin() + header.size(), pgm.end());
  CHECK(px == std::vector<std::uint8_t>{0, 128, 255, 0, 255, 255});
}
