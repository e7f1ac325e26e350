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

#include "psflab/nn/adam.hpp"

#include <cmath>

namespace psflab::nn {

template <typename S>
void adam_step(std::span<Tensor<S>> params, AdamState<S>& state, double lr, const AdamConfig& cfg) {
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.push_back(Node<S>::Array::Zero(p.numel()));
      state.v.push_back(Node<S>::Array::Zero(p.numel()));
    }
  }
  if (state.m.size() != params.size()) throw InvalidArgument("adam_step: parameter list changed between steps");
  ++state.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  const S b1 = static_cast<S>(cfg.beta1), b2 = static_cast<S>(cfg.beta2);
  const S step = static_cast<S>(lr / c1);
  const S inv_sqrt_c2 = static_cast<S>(1.0 / std::sqrt(c2));
  const S eps = static_cast<S>(cfg.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& node = *params[i].node();
    if (node.grad.size() != node.value.size()) node.ensure_grad();
    auto& m = state.m[i];
    auto& v = state.v[i];
    m = b1 * m + (S(1) - b1) * node.grad;
    v = b2 * v + (S(1) - b2) * node.grad.square();
    node.value -= step * m / (v.sqrt() * inv_sqrt_c2 + eps);
  }
}

double step_decay_lr(double lr0, int epoch, int every, double factor) {
  if (every <= 0) return lr0;
  return lr0 * std::pow(factor, static_cast<double>(epoch / every));
}

template void adam_step(std::span<Tensor<float>>, AdamState<float>&, double, const AdamConfig&);
template void adam_step(std::span<Tensor<double>>, AdamState<double>&, double, const AdamConfig&);
template struct AdamState<float>;
template struct AdamState<double>;

}  // namespace psflab::nn
