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

#ifndef PSFLAB_IO_HASH_HPP
#define PSFLAB_IO_HASH_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace psflab::io {

std::string sha1_hex(std::span<const std::uint8_t> bytes);
std::string sha1_hex(const std::string& text);

/// Same digest `git hash-object` prints: SHA-1 of "blob <size>\0" + content.
std::string git_blob_hash(std::span<const std::uint8_t> bytes);
std::string git_blob_hash(const std::filesystem::path& path);

std::string crc32_hex(std::span<const std::uint8_t> bytes);

}  // namespace psflab::io

#endif  // PSFLAB_IO_HASH_HPP
