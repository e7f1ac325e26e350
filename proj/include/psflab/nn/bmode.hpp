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

#ifndef PSFLAB_NN_BMODE_HPP
#define PSFLAB_NN_BMODE_HPP

#include "psflab/nn/tensor.hpp"

namespace psflab::nn {

// Complex tensors are channel-packed: a (2C, H, W) tensor holds the real
// parts of C complex channels followed by their imaginary parts. The
// transforms below run in double precision whatever the tensor scalar.

template <typename S>
Tensor<S> tensor_from_image(const ImageR& img, bool requires_grad = false);
template <typename S>
Tensor<S> tensor_from_image(const ImageC& img, bool requires_grad = false);
template <typename S>
ImageR real_image(const Tensor<S>& t, Index channel = 0);
/// Complex channel `channel` of a packed tensor.
template <typename S>
ImageC complex_image(const Tensor<S>& t, Index channel = 0);

/// Axial sampling used by the demodulation step.
struct BmodeParams {
  double fc = 5e6;
  double z0 = 0.0;
  double dz = 1.0;
  double c = 1540.0;
  double dr = 60.0;

  static BmodeParams from(const SimConfig& cfg, const Grid& grid);
};

/// Per-column analytic signal of a real (C, H, W) tensor, packed (2C, H, W).
template <typename S>
Tensor<S> analytic_signal(const Tensor<S>& x);

/// Multiplies each row by exp(-i 2 pi fc t), t = 2 z / c.
template <typename S>
Tensor<S> demodulate(const Tensor<S>& z, const BmodeParams& p);

/// sqrt(re^2 + im^2 + delta^2) with delta = rel_delta * max magnitude
/// (delta is held constant for differentiation). Output has C channels.
template <typename S>
Tensor<S> smooth_magnitude(const Tensor<S>& z, double rel_delta = 1e-6);

/// clamp(20 log10((m + eps) / (max m + eps)), -dr, 0) + dr, eps = 1e-12 max m.
/// The gradient flows through the maximum to the arg-max element; clamped
/// elements pass no gradient.
template <typename S>
Tensor<S> log_compress(const Tensor<S>& m, double dr = 60.0);

/// Orthonormal centered 2D transforms of packed complex tensors. Each is the
/// other's adjoint.
template <typename S>
Tensor<S> fft2_centered(const Tensor<S>& z);
template <typename S>
Tensor<S> ifft2_centered(const Tensor<S>& z);

/// First half of the channels of a packed tensor.
template <typename S>
Tensor<S> real_part(const Tensor<S>& z);

/// log(|b(y)|) for an RF tensor (1, H, W). Output in [0, dr].
template <typename S>
Tensor<S> bmode_chain(const Tensor<S>& y_rf, const BmodeParams& p);

/// bmode_chain(real(ifft2_centered(k))) for a packed k-space tensor (2, H, W).
template <typename S>
Tensor<S> bmode_chain_kspace(const Tensor<S>& y_k, const BmodeParams& p);

}  // namespace psflab::nn

#endif  // PSFLAB_NN_BMODE_HPP
