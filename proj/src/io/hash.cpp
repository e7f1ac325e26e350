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

#include "psflab/io/hash.hpp"

#include <cstdio>
#include <memory>
#include <vector>

#include <openssl/evp.h>

#include "psflab/io/tensor_file.hpp"

namespace psflab::io {
namespace {

std::string to_hex(const unsigned char* d, unsigned n) {
  std::string s;
  char buf[3];
  for (unsigned i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", d[i]);
    s += buf;
  }
  return s;
}

std::string sha1_parts(std::span<const std::uint8_t> head, std::span<const std::uint8_t> body) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), head.data(), head.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), body.data(), body.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw std::runtime_error("sha1: digest failed");
  return to_hex(md, len);
}

}  // namespace

std::string sha1_hex(std::span<const std::uint8_t> bytes) { return sha1_parts({}, bytes); }

std::string sha1_hex(const std::string& text) {
  return sha1_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string git_blob_hash(std::span<const std::uint8_t> bytes) {
  const std::string header = "blob " + std::to_string(bytes.size());
  std::vector<std::uint8_t> head(header.begin(), header.end());
  head.push_back(0);
  return sha1_parts(head, bytes);
}

std::string git_blob_hash(const std::filesystem::path& path) { return git_blob_hash(read_bytes(path)); }

std::string crc32_hex(std::span<const std::uint8_t> bytes) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc32(bytes));
  return buf;
}

}  // namespace psflab::io
