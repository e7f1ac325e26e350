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

#ifndef PSFLAB_RNG_HPP
#define PSFLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace psflab {

/// SplitMix64 finalizer. Used to derive independent stream seeds from
/// (seed, stream) pairs. Test vector: splitmix64(0) == 0xe220a8397b1dcdaf.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard (the 10000th draw from a
/// default-seeded engine is 9981545732273789042). The standard library
/// distributions are implementation-defined, so the uniform and normal
/// transforms are done here:
///   uniform(): top 53 bits of one draw, scaled to [0, 1)
///   normal():  Box-Muller on two uniforms, both outputs used in order
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  /// Uniform integer in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace psflab

#endif  // PSFLAB_RNG_HPP
