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

#include "psflab/sigproc.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace psflab {
namespace {

using cd = std::complex<double>;

void transform_lines(Eigen::FFT<double>& fft, std::vector<cd>& in, std::vector<cd>& out, bool inverse) {
  if (in.size() <= 1) {
    out = in;
    return;
  }
  if (inverse)
    fft.inv(out, in);
  else
    fft.fwd(out, in);
}

ImageC circshift(const ImageC& x, Index sr, Index sc) {
  const Index nr = x.rows(), nc = x.cols();
  ImageC out(nr, nc);
  for (Index r = 0; r < nr; ++r) {
    const Index rr = ((r + sr) % nr + nr) % nr;
    for (Index c = 0; c < nc; ++c) out(rr, ((c + sc) % nc + nc) % nc) = x(r, c);
  }
  return out;
}

}  // namespace

void fft_columns_inplace(ImageC& x, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Index nr = x.rows();
  std::vector<cd> in(static_cast<std::size_t>(nr)), out;
  for (Index c = 0; c < x.cols(); ++c) {
    for (Index r = 0; r < nr; ++r) in[static_cast<std::size_t>(r)] = x(r, c);
    transform_lines(fft, in, out, inverse);
    for (Index r = 0; r < nr; ++r) x(r, c) = out[static_cast<std::size_t>(r)];
  }
}

void fft2_inplace(ImageC& x, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Index nc = x.cols();
  std::vector<cd> in(static_cast<std::size_t>(nc)), out;
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < nc; ++c) in[static_cast<std::size_t>(c)] = x(r, c);
    transform_lines(fft, in, out, inverse);
    for (Index c = 0; c < nc; ++c) x(r, c) = out[static_cast<std::size_t>(c)];
  }
  fft_columns_inplace(x, inverse);
}

// fftshift: out[j] = in[j - n/2]; ifftshift is the reverse.
ImageC fftshift(const ImageC& x) { return circshift(x, x.rows() / 2, x.cols() / 2); }
ImageC ifftshift(const ImageC& x) { return circshift(x, -(x.rows() / 2), -(x.cols() / 2)); }

ImageC fft2_centered(const ImageC& x) {
  ImageC y = ifftshift(x);
  fft2_inplace(y, false);
  y /= std::sqrt(static_cast<double>(y.size()));
  return fftshift(y);
}

ImageC ifft2_centered(const ImageC& k) {
  ImageC y = ifftshift(k);
  fft2_inplace(y, true);
  y /= std::sqrt(static_cast<double>(y.size()));
  return fftshift(y);
}

ComplexPatch fft2_centered(const RealPatch& x) {
  return ComplexPatch(x.grid, ComplexKind::KSpace, fft2_centered(x.data));
}

ComplexPatch fft2_centered(const ComplexPatch& x) {
  return ComplexPatch(x.grid, ComplexKind::KSpace, fft2_centered(x.data));
}

ComplexPatch ifft2_centered(const ComplexPatch& k) {
  return ComplexPatch(k.grid, ComplexKind::Baseband, ifft2_centered(k.data));
}

ImageC analytic_filter_columns(const ImageC& x) {
  ImageC y = x;
  fft_columns_inplace(y, false);
  const Index n = y.rows();
  // One-sided weights: 1 at DC (and Nyquist for even n), 2 for positive bins, 0 otherwise.
  for (Index r = 0; r < n; ++r) {
    double w = 0.0;
    if (r == 0 || (n % 2 == 0 && r == n / 2))
      w = 1.0;
    else if (r < (n + 1) / 2)
      w = 2.0;
    y.row(r) *= w;
  }
  fft_columns_inplace(y, true);
  y /= static_cast<double>(n);
  return y;
}

ImageC analytic_signal(const ImageR& rf) { return analytic_filter_columns(rf.cast<cd>()); }

ComplexPatch baseband_demodulate(const RealPatch& rf, double fc) {
  if (rf.kind != RealKind::RF) throw InvalidArgument("baseband_demodulate: expected an RF patch");
  if (!(fc > 0.0)) throw InvalidArgument("baseband_demodulate: fc must be positive");
  ImageC a = analytic_signal(rf.data);
  for (Index r = 0; r < a.rows(); ++r) {
    const double t = 2.0 * rf.grid.z(r) / rf.grid.sound_speed;
    a.row(r) *= std::polar(1.0, -2.0 * kPi * fc * t);
  }
  return ComplexPatch(rf.grid, ComplexKind::Baseband, std::move(a));
}

ImageR envelope(const ImageR& rf) { return analytic_signal(rf).abs(); }

RealPatch envelope(const RealPatch& rf) {
  if (rf.kind != RealKind::RF) throw InvalidArgument("envelope: expected an RF patch");
  return RealPatch(rf.grid, RealKind::Envelope, envelope(rf.data));
}

ImageR log_compress(const ImageR& env, double dr) {
  if (!(dr > 0.0)) throw InvalidArgument("log_compress: dynamic range must be positive");
  if (env.size() == 0 || env.minCoeff() < 0.0) throw InvalidArgument("log_compress: envelope must be nonnegative");
  const double peak = env.maxCoeff();
  if (!(peak > 0.0)) throw InvalidArgument("log_compress: all-zero envelope");
  const double eps = 1e-12 * peak;
  const double ref = peak + eps;
  return (20.0 * ((env + eps) / ref).log10()).max(-dr).min(0.0) + dr;
}

RealPatch log_compress(const RealPatch& env, double dr) {
  if (env.kind != RealKind::Envelope) throw InvalidArgument("log_compress: expected an envelope patch");
  return RealPatch(env.grid, RealKind::Decibel, log_compress(env.data, dr));
}

ImageR bmode(const ImageR& rf, double dr) { return log_compress(envelope(rf), dr); }

RealPatch bmode(const RealPatch& rf, double dr) { return log_compress(envelope(rf), dr); }

}  // namespace psflab
