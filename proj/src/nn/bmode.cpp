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

#include "psflab/nn/bmode.hpp"

#include <cmath>

#include "psflab/nn/ops.hpp"
#include "psflab/sigproc.hpp"

namespace psflab::nn {
namespace {

using cd = std::complex<double>;

Index complex_channels(const Shape& s, const char* op) {
  if (s.c % 2 != 0) throw InvalidArgument(std::string(op) + ": packed complex tensor needs an even channel count");
  return s.c / 2;
}

// Reads complex channel c of a packed value array.
template <typename A>
ImageC read_complex(const A& v, const Shape& s, Index c) {
  const Index nc = s.c / 2, pl = s.plane();
  ImageC out(s.h, s.w);
  for (Index i = 0; i < pl; ++i) out.data()[i] = cd(v[c * pl + i], v[(nc + c) * pl + i]);
  return out;
}

template <typename A>
void write_complex(A& v, const Shape& s, Index c, const ImageC& z, bool accumulate) {
  using S = typename A::Scalar;
  const Index nc = s.c / 2, pl = s.plane();
  for (Index i = 0; i < pl; ++i) {
    const S re = static_cast<S>(z.data()[i].real()), im = static_cast<S>(z.data()[i].imag());
    if (accumulate) {
      v[c * pl + i] += re;
      v[(nc + c) * pl + i] += im;
    } else {
      v[c * pl + i] = re;
      v[(nc + c) * pl + i] = im;
    }
  }
}

template <typename S, typename Fwd, typename Bwd>
Tensor<S> packed_linear(const char* op, const Tensor<S>& z, Fwd fwd, Bwd bwd) {
  const Shape s = z.shape();
  const Index nc = complex_channels(s, op);
  typename Node<S>::Array out(s.numel());
  for (Index c = 0; c < nc; ++c) write_complex(out, s, c, fwd(read_complex(z.value(), s, c)), false);
  return make_result<S>(op, s, std::move(out), {z}, [s, nc, bwd](Node<S>& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (Index c = 0; c < nc; ++c) write_complex(g, s, c, bwd(read_complex(self.grad, s, c)), true);
  });
}

}  // namespace

template <typename S>
Tensor<S> tensor_from_image(const ImageR& img, bool requires_grad) {
  typename Node<S>::Array v = Eigen::Map<const Eigen::ArrayXd>(img.data(), img.size()).cast<S>();
  return Tensor<S>::from(Shape{1, img.rows(), img.cols()}, std::move(v), requires_grad);
}

template <typename S>
Tensor<S> tensor_from_image(const ImageC& img, bool requires_grad) {
  const Shape s{2, img.rows(), img.cols()};
  typename Node<S>::Array v(s.numel());
  write_complex(v, s, 0, img, false);
  return Tensor<S>::from(s, std::move(v), requires_grad);
}

template <typename S>
ImageR real_image(const Tensor<S>& t, Index channel) {
  return t.channel(channel).template cast<double>();
}

template <typename S>
ImageC complex_image(const Tensor<S>& t, Index channel) {
  complex_channels(t.shape(), "complex_image");
  return read_complex(t.value(), t.shape(), channel);
}

BmodeParams BmodeParams::from(const SimConfig& cfg, const Grid& grid) {
  return BmodeParams{cfg.fc, grid.z0, grid.dz, grid.sound_speed, cfg.dynamic_range};
}

template <typename S>
Tensor<S> analytic_signal(const Tensor<S>& x) {
  const Shape xs = x.shape();
  const Shape os{2 * xs.c, xs.h, xs.w};
  typename Node<S>::Array out(os.numel());
  for (Index c = 0; c < xs.c; ++c) {
    const ImageC z = analytic_filter_columns(x.channel(c).template cast<double>().template cast<cd>());
    write_complex(out, os, c, z, false);
  }
  return make_result<S>("analytic_signal", os, std::move(out), {x}, [xs, os](Node<S>& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (Index c = 0; c < xs.c; ++c) {
      const ImageC t = analytic_filter_columns(read_complex(self.grad, os, c));
      for (Index i = 0; i < xs.plane(); ++i) g[c * xs.plane() + i] += static_cast<S>(t.data()[i].real());
    }
  });
}

template <typename S>
Tensor<S> demodulate(const Tensor<S>& z, const BmodeParams& p) {
  const Index h = z.shape().h;
  Eigen::ArrayXcd rot(h);
  for (Index r = 0; r < h; ++r) {
    const double t = 2.0 * (p.z0 + static_cast<double>(r) * p.dz) / p.c;
    rot[r] = std::polar(1.0, -2.0 * kPi * p.fc * t);
  }
  auto apply = [rot](ImageC v, bool conj) {
    for (Index r = 0; r < v.rows(); ++r) v.row(r) *= conj ? std::conj(rot[r]) : rot[r];
    return v;
  };
  return packed_linear<S>(
      "demodulate", z, [apply](const ImageC& v) { return apply(v, false); },
      [apply](const ImageC& g) { return apply(g, true); });
}

template <typename S>
Tensor<S> smooth_magnitude(const Tensor<S>& z, double rel_delta) {
  const Shape s = z.shape();
  const Index nc = complex_channels(s, "smooth_magnitude");
  const Index n = nc * s.plane();
  const auto re = z.value().head(n);
  const auto im = z.value().tail(n);
  const typename Node<S>::Array mag2 = re.square() + im.square();
  const S delta = static_cast<S>(rel_delta) * std::sqrt(mag2.maxCoeff());
  typename Node<S>::Array m = (mag2 + delta * delta).sqrt();
  return make_result<S>("smooth_magnitude", Shape{nc, s.h, s.w}, m, {z}, [n, m](Node<S>& self) {
    auto& p = *self.parents[0];
    auto& g = p.ensure_grad();
    g.head(n) += self.grad * p.value.head(n) / m;
    g.tail(n) += self.grad * p.value.tail(n) / m;
  });
}

template <typename S>
Tensor<S> log_compress(const Tensor<S>& m, double dr) {
  if (!(dr > 0.0)) throw InvalidArgument("log_compress: dynamic range must be positive");
  Index arg = 0;
  const S peak = m.value().maxCoeff(&arg);
  if (!(peak > S(0))) throw InvalidArgument("log_compress: all-zero input");
  if (m.value().minCoeff() < S(0)) throw InvalidArgument("log_compress: negative input");
  const S k = static_cast<S>(1e-12);
  const S c = static_cast<S>(20.0 / std::log(10.0));
  const S sdr = static_cast<S>(dr);
  const typename Node<S>::Array raw = c * ((m.value() + k * peak).log() - std::log(peak + k * peak));
  const Eigen::Array<bool, Eigen::Dynamic, 1> active = raw >= -sdr;
  typename Node<S>::Array out = raw.max(-sdr).min(S(0)) + sdr;
  return make_result<S>("log_compress", m.shape(), std::move(out), {m}, [=](Node<S>& self) {
    auto& p = *self.parents[0];
    auto& g = p.ensure_grad();
    const typename Node<S>::Array denom = p.value + k * peak;
    const typename Node<S>::Array ga = active.select(self.grad, S(0));
    g += c * ga / denom;
    g[arg] += c * (k * (ga / denom).sum() - ga.sum() / peak);
  });
}

template <typename S>
Tensor<S> fft2_centered(const Tensor<S>& z) {
  return packed_linear<S>(
      "fft2_centered", z, [](const ImageC& v) { return psflab::fft2_centered(v); },
      [](const ImageC& g) { return psflab::ifft2_centered(g); });
}

template <typename S>
Tensor<S> ifft2_centered(const Tensor<S>& z) {
  return packed_linear<S>(
      "ifft2_centered", z, [](const ImageC& v) { return psflab::ifft2_centered(v); },
      [](const ImageC& g) { return psflab::fft2_centered(g); });
}

template <typename S>
Tensor<S> real_part(const Tensor<S>& z) {
  return slice_channels(z, 0, complex_channels(z.shape(), "real_part"));
}

template <typename S>
Tensor<S> bmode_chain(const Tensor<S>& y_rf, const BmodeParams& p) {
  return log_compress(smooth_magnitude(demodulate(analytic_signal(y_rf), p)), p.dr);
}

template <typename S>
Tensor<S> bmode_chain_kspace(const Tensor<S>& y_k, const BmodeParams& p) {
  return bmode_chain(real_part(ifft2_centered(y_k)), p);
}

#define PSFLAB_INSTANTIATE_BMODE(S)                                           \
  template Tensor<S> tensor_from_image<S>(const ImageR&, bool);              \
  template Tensor<S> tensor_from_image<S>(const ImageC&, bool);              \
  template ImageR real_image(const Tensor<S>&, Index);                       \
  template ImageC complex_image(const Tensor<S>&, Index);                    \
  template Tensor<S> analytic_signal(const Tensor<S>&);                      \
  template Tensor<S> demodulate(const Tensor<S>&, const BmodeParams&);       \
  template Tensor<S> smooth_magnitude(const Tensor<S>&, double);             \
  template Tensor<S> log_compress(const Tensor<S>&, double);                 \
  template Tensor<S> fft2_centered(const Tensor<S>&);                        \
  template Tensor<S> ifft2_centered(const Tensor<S>&);                       \
  template Tensor<S> real_part(const Tensor<S>&);                            \
  template Tensor<S> bmode_chain(const Tensor<S>&, const BmodeParams&);      \
  template Tensor<S> bmode_chain_kspace(const Tensor<S>&, const BmodeParams&);

PSFLAB_INSTANTIATE_BMODE(float)
PSFLAB_INSTANTIATE_BMODE(double)

}  // namespace psflab::nn
