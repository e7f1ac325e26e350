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

#include "psflab/nn/ops.hpp"

#include <algorithm>
#include <cmath>

namespace psflab::nn {
namespace {

template <typename S>
using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ConvGeom {
  Index cin, h, w, k, stride, pad, ho, wo;
  Index rows() const { return cin * k * k; }
  Index cols() const { return ho * wo; }
};

template <typename S>
void im2col(const S* x, const ConvGeom& g, S* col) {
  for (Index c = 0; c < g.cin; ++c)
    for (Index ky = 0; ky < g.k; ++ky)
      for (Index kx = 0; kx < g.k; ++kx) {
        S* row = col + ((c * g.k + ky) * g.k + kx) * g.cols();
        for (Index oy = 0; oy < g.ho; ++oy) {
          S* dst = row + oy * g.wo;
          const Index iy = oy * g.stride + ky - g.pad;
          if (iy < 0 || iy >= g.h) {
            std::fill(dst, dst + g.wo, S(0));
            continue;
          }
          const S* src = x + (c * g.h + iy) * g.w;
          for (Index ox = 0; ox < g.wo; ++ox) {
            const Index ix = ox * g.stride + kx - g.pad;
            dst[ox] = (ix >= 0 && ix < g.w) ? src[ix] : S(0);
          }
        }
      }
}

template <typename S>
void col2im_add(const S* col, const ConvGeom& g, S* x) {
  for (Index c = 0; c < g.cin; ++c)
    for (Index ky = 0; ky < g.k; ++ky)
      for (Index kx = 0; kx < g.k; ++kx) {
        const S* row = col + ((c * g.k + ky) * g.k + kx) * g.cols();
        for (Index oy = 0; oy < g.ho; ++oy) {
          const Index iy = oy * g.stride + ky - g.pad;
          if (iy < 0 || iy >= g.h) continue;
          const S* src = row + oy * g.wo;
          S* dst = x + (c * g.h + iy) * g.w;
          for (Index ox = 0; ox < g.wo; ++ox) {
            const Index ix = ox * g.stride + kx - g.pad;
            if (ix >= 0 && ix < g.w) dst[ix] += src[ox];
          }
        }
      }
}

template <typename S>
void require_same(const Tensor<S>& a, const Tensor<S>& b, const char* op) {
  if (!(a.shape() == b.shape()))
    throw InvalidArgument(std::string(op) + ": shape " + a.shape().str() + " vs " + b.shape().str());
}

template <typename S>
bool wants(const Node<S>& n, std::size_t i) {
  return n.parents[i]->requires_grad;
}

}  // namespace

template <typename S>
Tensor<S> conv2d(const Tensor<S>& x, const Tensor<S>& w, const Tensor<S>& b, int stride) {
  const Shape xs = x.shape(), ws = w.shape();
  const Index k = static_cast<Index>(std::lround(std::sqrt(static_cast<double>(ws.w))));
  if (k * k != ws.w || k % 2 == 0) throw InvalidArgument("conv2d: kernel must be odd and square, got " + ws.str());
  if (ws.h != xs.c) throw InvalidArgument("conv2d: weight " + ws.str() + " does not match input " + xs.str());
  if (b.numel() != ws.c) throw InvalidArgument("conv2d: bias size does not match output channels");
  if (stride != 1 && stride != 2) throw InvalidArgument("conv2d: stride must be 1 or 2");
  const Index pad = k / 2;
  ConvGeom g{xs.c, xs.h, xs.w, k, stride, pad, (xs.h + 2 * pad - k) / stride + 1, (xs.w + 2 * pad - k) / stride + 1};
  const Index cout = ws.c;

  auto col = std::make_shared<RowMat<S>>(g.rows(), g.cols());
  im2col(x.value().data(), g, col->data());
  typename Node<S>::Array out(cout * g.cols());
  Eigen::Map<RowMat<S>> om(out.data(), cout, g.cols());
  Eigen::Map<const RowMat<S>> wm(w.value().data(), cout, g.rows());
  om.noalias() = wm * *col;
  for (Index o = 0; o < cout; ++o) om.row(o).array() += b.value()[o];

  return make_result<S>("conv2d", Shape{cout, g.ho, g.wo}, std::move(out), {x, w, b}, [g, cout, col](Node<S>& self) {
    Eigen::Map<const RowMat<S>> gm(self.grad.data(), cout, g.cols());
    auto& xp = *self.parents[0];
    auto& wp = *self.parents[1];
    auto& bp = *self.parents[2];
    if (wp.requires_grad) {
      Eigen::Map<RowMat<S>> dw(wp.ensure_grad().data(), cout, g.rows());
      dw.noalias() += gm * col->transpose();
    }
    if (bp.requires_grad) bp.ensure_grad() += gm.rowwise().sum().array();
    if (xp.requires_grad) {
      Eigen::Map<const RowMat<S>> wm(wp.value.data(), cout, g.rows());
      RowMat<S> dcol = wm.transpose() * gm;
      col2im_add(dcol.data(), g, xp.ensure_grad().data());
    }
  });
}

template <typename S>
Tensor<S> complex_block_weight(const Tensor<S>& wr, const Tensor<S>& wi) {
  require_same(wr, wi, "complex_block_weight");
  const Shape s = wr.shape();
  const Index co = s.c, ci = s.h, kk = s.w;
  typename Node<S>::Array out(4 * s.numel());
  // Block (bo, bi) of the output, each co x ci x kk.
  auto at = [=](Index bo, Index bi, Index o, Index i) { return ((bo * co + o) * 2 * ci + bi * ci + i) * kk; };
  for (Index o = 0; o < co; ++o)
    for (Index i = 0; i < ci; ++i) {
      const auto r = wr.value().segment((o * ci + i) * kk, kk);
      const auto m = wi.value().segment((o * ci + i) * kk, kk);
      out.segment(at(0, 0, o, i), kk) = r;
      out.segment(at(0, 1, o, i), kk) = -m;
      out.segment(at(1, 0, o, i), kk) = m;
      out.segment(at(1, 1, o, i), kk) = r;
    }
  return make_result<S>("complex_block_weight", Shape{2 * co, 2 * ci, kk}, std::move(out), {wr, wi},
                        [=](Node<S>& self) {
                          const auto& gg = self.grad;
                          auto& pr = *self.parents[0];
                          auto& pi = *self.parents[1];
                          for (Index o = 0; o < co; ++o)
                            for (Index i = 0; i < ci; ++i) {
                              const Index src = (o * ci + i) * kk;
                              if (pr.requires_grad)
                                pr.ensure_grad().segment(src, kk) +=
                                    gg.segment(at(0, 0, o, i), kk) + gg.segment(at(1, 1, o, i), kk);
                              if (pi.requires_grad)
                                pi.ensure_grad().segment(src, kk) +=
                                    gg.segment(at(1, 0, o, i), kk) - gg.segment(at(0, 1, o, i), kk);
                            }
                        });
}

template <typename S>
Tensor<S> leaky_relu(const Tensor<S>& x, double slope) {
  const S a = static_cast<S>(slope);
  typename Node<S>::Array out = (x.value() > S(0)).select(x.value(), a * x.value());
  return make_result<S>("leaky_relu", x.shape(), std::move(out), {x}, [a](Node<S>& self) {
    auto& p = *self.parents[0];
    p.ensure_grad() += (p.value > S(0)).select(self.grad, a * self.grad);
  });
}

template <typename S>
Tensor<S> add(const Tensor<S>& a, const Tensor<S>& b) {
  require_same(a, b, "add");
  return make_result<S>("add", a.shape(), a.value() + b.value(), {a, b}, [](Node<S>& self) {
    for (std::size_t i = 0; i < 2; ++i)
      if (wants(self, i)) self.parents[i]->ensure_grad() += self.grad;
  });
}

template <typename S>
Tensor<S> sub(const Tensor<S>& a, const Tensor<S>& b) {
  require_same(a, b, "sub");
  return make_result<S>("sub", a.shape(), a.value() - b.value(), {a, b}, [](Node<S>& self) {
    if (wants(self, 0)) self.parents[0]->ensure_grad() += self.grad;
    if (wants(self, 1)) self.parents[1]->ensure_grad() -= self.grad;
  });
}

template <typename S>
Tensor<S> mul(const Tensor<S>& a, const Tensor<S>& b) {
  require_same(a, b, "mul");
  return make_result<S>("mul", a.shape(), a.value() * b.value(), {a, b}, [](Node<S>& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    if (pa.requires_grad) pa.ensure_grad() += self.grad * pb.value;
    if (pb.requires_grad) pb.ensure_grad() += self.grad * pa.value;
  });
}

template <typename S>
Tensor<S> div(const Tensor<S>& a, const Tensor<S>& b) {
  require_same(a, b, "div");
  return make_result<S>("div", a.shape(), a.value() / b.value(), {a, b}, [](Node<S>& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    if (pa.requires_grad) pa.ensure_grad() += self.grad / pb.value;
    if (pb.requires_grad) pb.ensure_grad() -= self.grad * pa.value / (pb.value * pb.value);
  });
}

template <typename S>
Tensor<S> scale(const Tensor<S>& a, double s) {
  const S k = static_cast<S>(s);
  return make_result<S>("scale", a.shape(), a.value() * k, {a},
                        [k](Node<S>& self) { self.parents[0]->ensure_grad() += k * self.grad; });
}

template <typename S>
Tensor<S> add_scalar(const Tensor<S>& a, double s) {
  return make_result<S>("add_scalar", a.shape(), a.value() + static_cast<S>(s), {a},
                        [](Node<S>& self) { self.parents[0]->ensure_grad() += self.grad; });
}

template <typename S>
Tensor<S> square(const Tensor<S>& a) {
  return make_result<S>("square", a.shape(), a.value().square(), {a}, [](Node<S>& self) {
    auto& p = *self.parents[0];
    p.ensure_grad() += S(2) * p.value * self.grad;
  });
}

template <typename S>
Tensor<S> abs(const Tensor<S>& a) {
  return make_result<S>("abs", a.shape(), a.value().abs(), {a}, [](Node<S>& self) {
    auto& p = *self.parents[0];
    p.ensure_grad() += p.value.sign() * self.grad;
  });
}

template <typename S>
Tensor<S> sum(const Tensor<S>& a) {
  typename Node<S>::Array out(1);
  out[0] = a.value().sum();
  return make_result<S>("sum", Shape{}, std::move(out), {a},
                        [](Node<S>& self) { self.parents[0]->ensure_grad() += self.grad[0]; });
}

template <typename S>
Tensor<S> mean(const Tensor<S>& a) {
  typename Node<S>::Array out(1);
  const S n = static_cast<S>(a.numel());
  out[0] = a.value().sum() / n;
  return make_result<S>("mean", Shape{}, std::move(out), {a},
                        [n](Node<S>& self) { self.parents[0]->ensure_grad() += self.grad[0] / n; });
}

template <typename S>
Tensor<S> concat_channels(const std::vector<Tensor<S>>& parts) {
  if (parts.empty()) throw InvalidArgument("concat_channels: no inputs");
  Shape s = parts.front().shape();
  s.c = 0;
  for (const auto& p : parts) {
    if (p.shape().h != s.h || p.shape().w != s.w) throw InvalidArgument("concat_channels: spatial shape mismatch");
    s.c += p.shape().c;
  }
  typename Node<S>::Array out(s.numel());
  Index off = 0;
  for (const auto& p : parts) {
    out.segment(off, p.numel()) = p.value();
    off += p.numel();
  }
  return make_result<S>("concat_channels", s, std::move(out), parts, [](Node<S>& self) {
    Index off = 0;
    for (auto& p : self.parents) {
      const Index n = p->value.size();
      if (p->requires_grad) p->ensure_grad() += self.grad.segment(off, n);
      off += n;
    }
  });
}

template <typename S>
Tensor<S> slice_channels(const Tensor<S>& x, Index begin, Index count) {
  const Shape xs = x.shape();
  if (begin < 0 || count <= 0 || begin + count > xs.c) throw InvalidArgument("slice_channels: range outside " + xs.str());
  const Index plane = xs.plane();
  return make_result<S>("slice_channels", Shape{count, xs.h, xs.w}, x.value().segment(begin * plane, count * plane),
                        {x}, [=](Node<S>& self) {
                          self.parents[0]->ensure_grad().segment(begin * plane, count * plane) += self.grad;
                        });
}

template <typename S>
Tensor<S> upsample_nearest2x(const Tensor<S>& x) {
  const Shape xs = x.shape();
  const Shape os{xs.c, 2 * xs.h, 2 * xs.w};
  typename Node<S>::Array out(os.numel());
  for (Index c = 0; c < xs.c; ++c)
    for (Index y = 0; y < os.h; ++y)
      for (Index u = 0; u < os.w; ++u) out[(c * os.h + y) * os.w + u] = x.value()[(c * xs.h + y / 2) * xs.w + u / 2];
  return make_result<S>("upsample_nearest2x", os, std::move(out), {x}, [xs, os](Node<S>& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (Index c = 0; c < xs.c; ++c)
      for (Index y = 0; y < os.h; ++y)
        for (Index u = 0; u < os.w; ++u) g[(c * xs.h + y / 2) * xs.w + u / 2] += self.grad[(c * os.h + y) * os.w + u];
  });
}

template <typename S>
Tensor<S> separable_filter_valid(const Tensor<S>& x, const Eigen::VectorXd& kernel) {
  const Shape xs = x.shape();
  const Index k = kernel.size();
  if (k < 1 || xs.h < k || xs.w < k) throw InvalidArgument("separable_filter_valid: kernel larger than input");
  const Shape os{xs.c, xs.h - k + 1, xs.w - k + 1};
  const Eigen::Array<S, Eigen::Dynamic, 1> kw = kernel.cast<S>().array();
  typename Node<S>::Array out(os.numel());
  for (Index c = 0; c < xs.c; ++c) {
    Eigen::Map<const Image<S>> in(x.value().data() + c * xs.plane(), xs.h, xs.w);
    Image<S> tmp = Image<S>::Zero(xs.h, os.w);
    for (Index t = 0; t < k; ++t) tmp += kw[t] * in.middleCols(t, os.w);
    Eigen::Map<Image<S>> o(out.data() + c * os.plane(), os.h, os.w);
    o.setZero();
    for (Index t = 0; t < k; ++t) o += kw[t] * tmp.middleRows(t, os.h);
  }
  return make_result<S>("separable_filter_valid", os, std::move(out), {x}, [xs, os, kw, k](Node<S>& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (Index c = 0; c < xs.c; ++c) {
      Eigen::Map<const Image<S>> go(self.grad.data() + c * os.plane(), os.h, os.w);
      Image<S> gtmp = Image<S>::Zero(xs.h, os.w);
      for (Index t = 0; t < k; ++t) gtmp.middleRows(t, os.h) += kw[t] * go;
      Eigen::Map<Image<S>> gx(g.data() + c * xs.plane(), xs.h, xs.w);
      for (Index t = 0; t < k; ++t) gx.middleCols(t, os.w) += kw[t] * gtmp;
    }
  });
}

#define PSFLAB_INSTANTIATE_OPS(S)                                                              \
  template Tensor<S> conv2d(const Tensor<S>&, const Tensor<S>&, const Tensor<S>&, int);         \
  template Tensor<S> complex_block_weight(const Tensor<S>&, const Tensor<S>&);                  \
  template Tensor<S> leaky_relu(const Tensor<S>&, double);                                      \
  template Tensor<S> add(const Tensor<S>&, const Tensor<S>&);                                   \
  template Tensor<S> sub(const Tensor<S>&, const Tensor<S>&);                                   \
  template Tensor<S> mul(const Tensor<S>&, const Tensor<S>&);                                   \
  template Tensor<S> div(const Tensor<S>&, const Tensor<S>&);                                   \
  template Tensor<S> scale(const Tensor<S>&, double);                                           \
  template Tensor<S> add_scalar(const Tensor<S>&, double);                                      \
  template Tensor<S> square(const Tensor<S>&);                                                  \
  template Tensor<S> abs(const Tensor<S>&);                                                     \
  template Tensor<S> sum(const Tensor<S>&);                                                     \
  template Tensor<S> mean(const Tensor<S>&);                                                    \
  template Tensor<S> concat_channels(const std::vector<Tensor<S>>&);                            \
  template Tensor<S> slice_channels(const Tensor<S>&, Index, Index);                            \
  template Tensor<S> upsample_nearest2x(const Tensor<S>&);                                      \
  template Tensor<S> separable_filter_valid(const Tensor<S>&, const Eigen::VectorXd&);

PSFLAB_INSTANTIATE_OPS(float)
PSFLAB_INSTANTIATE_OPS(double)

}  // namespace psflab::nn
