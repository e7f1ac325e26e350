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

#ifndef PSFLAB_PARALLEL_HPP
#define PSFLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace psflab {

/// Runs fn(i) for i in [0, n) on up to `workers` threads, returning after all
/// calls finish. Indices are claimed dynamically. Exceptions are stored per
/// index; the returned vector holds them (null where fn succeeded).
template <typename Fn>
std::vector<std::exception_ptr> parallel_for_collect(std::size_t n, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (count <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(body);
  }
  return errors;
}

/// As parallel_for_collect, then rethrows the failure with the lowest index.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  for (auto& e : parallel_for_collect(n, workers, std::forward<Fn>(fn)))
    if (e) std::rethrow_exception(e);
}

}  // namespace psflab

#endif  // PSFLAB_PARALLEL_HPP
