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

#ifndef PSFLAB_NN_ADAM_HPP
#define PSFLAB_NN_ADAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "psflab/nn/tensor.hpp"

namespace psflab::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename S>
struct AdamState {
  std::vector<typename Node<S>::Array> m, v;
  std::int64_t t = 0;
};

/// One bias-corrected Adam update of every tensor in `params` from its grad.
/// Tensors without an accumulated grad count as zero-gradient.
template <typename S>
void adam_step(std::span<Tensor<S>> params, AdamState<S>& state, double lr, const AdamConfig& cfg = {});

/// lr0 * factor^floor(epoch / every).
double step_decay_lr(double lr0, int epoch, int every = 10, double factor = 0.1);

}  // namespace psflab::nn

#endif  // PSFLAB_NN_ADAM_HPP
