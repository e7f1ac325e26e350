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

#ifndef PSFLAB_SIGPROC_HPP
#define PSFLAB_SIGPROC_HPP

#include "psflab/core.hpp"

namespace psflab {

/// Unscaled 2D DFT in place (forward uses exp(-i...)). The inverse does not divide by N.
void fft2_inplace(ImageC& x, bool inverse);

/// 1D unscaled DFT along every column.
void fft_columns_inplace(ImageC& x, bool inverse);

/// Circular shift so that index floor(n/2) moves to 0 along both axes (ifftshift),
/// or back (fftshift).
ImageC ifftshift(const ImageC& x);
ImageC fftshift(const ImageC& x);

/// Orthonormal centered transform: DC at (nz/2, nx/2), spatial origin at the
/// center pixel. ifft2_centered is its exact inverse and adjoint.
ImageC fft2_centered(const ImageC& x);
ImageC ifft2_centered(const ImageC& k);

inline ImageC fft2_centered(const ImageR& x) { return fft2_centered(ImageC(x.cast<std::complex<double>>())); }

ComplexPatch fft2_centered(const RealPatch& x);
ComplexPatch fft2_centered(const ComplexPatch& x);
ComplexPatch ifft2_centered(const ComplexPatch& k);

/// Per-column analytic signal by the one-sided spectrum method.
ImageC analytic_signal(const ImageR& rf);

/// The same one-sided column filter applied to complex data. The filter is
/// self-adjoint, so this is also its adjoint.
ImageC analytic_filter_columns(const ImageC& x);

/// Analytic signal shifted to baseband with exp(-i 2 pi fc t), t = 2 z / c the
/// two-way travel time of each row. The magnitude is the envelope.
ComplexPatch baseband_demodulate(const RealPatch& rf, double fc);

RealPatch envelope(const RealPatch& rf);
ImageR envelope(const ImageR& rf);

/// Normalize to peak, floor at -dr dB, shift by +dr. Output lies in [0, dr].
/// eps = 1e-12 * max(env) keeps exact zeros finite.
ImageR log_compress(const ImageR& env, double dr = 60.0);
RealPatch log_compress(const RealPatch& env, double dr = 60.0);

/// envelope followed by log_compress.
RealPatch bmode(const RealPatch& rf, double dr = 60.0);
ImageR bmode(const ImageR& rf, double dr = 60.0);

}  // namespace psflab

#endif  // PSFLAB_SIGPROC_HPP
