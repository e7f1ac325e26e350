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

#include "psflab/metrics.hpp"

#include <cmath>
#include <queue>

#include "psflab/sigproc.hpp"

namespace psflab {
namespace {

constexpr Index kWin = 11;

void require_same_shape(const ImageR& a, const ImageR& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument(std::string(who) + ": shape mismatch");
}

void require_same_grid(const RealPatch& a, const RealPatch& b, const char* who) {
  if (!(a.grid == b.grid)) throw InvalidArgument(std::string(who) + ": grid mismatch");
}

// Separable valid-mode filter with kernel w.
ImageR filter_valid(const ImageR& x, const Eigen::VectorXd& w) {
  const Index k = w.size();
  const Index nr = x.rows() - k + 1, nc = x.cols() - k + 1;
  ImageR tmp = ImageR::Zero(x.rows(), nc);
  for (Index t = 0; t < k; ++t) tmp += w[t] * x.middleCols(t, nc);
  ImageR out = ImageR::Zero(nr, nc);
  for (Index t = 0; t < k; ++t) out += w[t] * tmp.middleRows(t, nr);
  return out;
}

}  // namespace

Eigen::VectorXd ssim_window() {
  Eigen::VectorXd w(kWin);
  constexpr double sigma = 1.5;
  for (Index i = 0; i < kWin; ++i) {
    const double d = static_cast<double>(i - kWin / 2);
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return w / w.sum();
}

double ssim_db(const ImageR& a, const ImageR& b, double dr) {
  require_same_shape(a, b, "ssim_db");
  if (a.rows() < kWin || a.cols() < kWin) throw InvalidArgument("ssim_db: image smaller than the 11 x 11 window");
  const double c1 = (0.01 * dr) * (0.01 * dr);
  const double c2 = (0.03 * dr) * (0.03 * dr);
  const Eigen::VectorXd w = ssim_window();
  const ImageR mu_a = filter_valid(a, w);
  const ImageR mu_b = filter_valid(b, w);
  const ImageR s_aa = filter_valid(a * a, w) - mu_a * mu_a;
  const ImageR s_bb = filter_valid(b * b, w) - mu_b * mu_b;
  const ImageR s_ab = filter_valid(a * b, w) - mu_a * mu_b;
  const ImageR num = (2.0 * mu_a * mu_b + c1) * (2.0 * s_ab + c2);
  const ImageR den = (mu_a * mu_a + mu_b * mu_b + c1) * (s_aa + s_bb + c2);
  return (num / den).mean();
}

double ssim_db(const RealPatch& a, const RealPatch& b, double dr) {
  require_same_grid(a, b, "ssim_db");
  if (a.kind != RealKind::Decibel || b.kind != RealKind::Decibel) throw InvalidArgument("ssim_db: expected Decibel patches");
  return ssim_db(a.data, b.data, dr);
}

Eigen::VectorXd lateral_beam_pattern(const ImageR& db) { return db.colwise().mean().transpose().matrix(); }

double lbpd(const ImageR& a, const ImageR& b) {
  require_same_shape(a, b, "lbpd");
  return (lateral_beam_pattern(a) - lateral_beam_pattern(b)).norm();
}

double lbpd(const RealPatch& a, const RealPatch& b) {
  require_same_grid(a, b, "lbpd");
  return lbpd(a.data, b.data);
}

int db_band(double v) {
  if (v >= 40.0) return 1;
  if (v >= 20.0) return 2;
  return 3;
}

IouBands iou_bands(const ImageR& a, const ImageR& b) {
  require_same_shape(a, b, "iou_bands");
  std::array<Index, 4> inter{}, uni{};
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c) {
      const int ba = db_band(a(r, c)), bb = db_band(b(r, c));
      if (ba == bb) {
        ++inter[ba];
        ++uni[ba];
      } else {
        ++uni[ba];
        ++uni[bb];
      }
    }
  auto score = [&](int k) {
    return uni[k] == 0 ? 1.0 : static_cast<double>(inter[k]) / static_cast<double>(uni[k]);
  };
  IouBands out{score(1), score(2), score(3), 0.0};
  out.mean = (out.iou1 + out.iou2 + out.iou3) / 3.0;
  return out;
}

IouBands iou_bands(const RealPatch& a, const RealPatch& b) {
  require_same_grid(a, b, "iou_bands");
  return iou_bands(a.data, b.data);
}

MainlobeRegion mainlobe_region(const RealPatch& psf_rf) {
  const ImageR env = envelope(psf_rf.data);
  Index pr = 0, pc = 0;
  const double peak = env.maxCoeff(&pr, &pc);
  if (!(peak > 0.0)) throw InvalidArgument("mainlobe_region: all-zero PSF");
  const double threshold = 0.1 * peak;

  Image<unsigned char> seen = Image<unsigned char>::Zero(env.rows(), env.cols());
  MainlobeRegion reg{pr, pr, pc, pc};
  std::queue<std::pair<Index, Index>> q;
  q.emplace(pr, pc);
  seen(pr, pc) = 1;
  while (!q.empty()) {
    const auto [r, c] = q.front();
    q.pop();
    reg.row0 = std::min(reg.row0, r);
    reg.row1 = std::max(reg.row1, r);
    reg.col0 = std::min(reg.col0, c);
    reg.col1 = std::max(reg.col1, c);
    constexpr Index dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const Index rr = r + dr[k], cc = c + dc[k];
      if (rr < 0 || cc < 0 || rr >= env.rows() || cc >= env.cols() || seen(rr, cc)) continue;
      if (env(rr, cc) < threshold) continue;
      seen(rr, cc) = 1;
      q.emplace(rr, cc);
    }
  }
  return reg;
}

double sidelobe_energy_ratio(const RealPatch& psf_rf, const MainlobeRegion& region) {
  double inside = 0.0, outside = 0.0;
  for (Index r = 0; r < psf_rf.data.rows(); ++r)
    for (Index c = 0; c < psf_rf.data.cols(); ++c) {
      const double e = psf_rf.data(r, c) * psf_rf.data(r, c);
      (region.contains(r, c) ? inside : outside) += e;
    }
  if (!(inside > 0.0)) throw InvalidArgument("sidelobe_energy_ratio: no energy inside the mainlobe region");
  return outside / inside;
}

double sidelobe_energy_ratio(const RealPatch& psf_rf) { return sidelobe_energy_ratio(psf_rf, mainlobe_region(psf_rf)); }

nlohmann::json MetricsReport::to_json() const {
  return {{"ssim", ssim}, {"lbpd", lbpd},         {"iou1", iou1},
          {"iou2", iou2}, {"iou3", iou3},         {"iou_mean", iou_mean},
          {"sidelobe_ratio", sidelobe_ratio}};
}

MetricsReport evaluate_psf(const RealPatch& pred_rf, const RealPatch& target_rf, double dr) {
  if (pred_rf.data.rows() != target_rf.data.rows() || pred_rf.data.cols() != target_rf.data.cols())
    throw InvalidArgument("evaluate_psf: shape mismatch");
  const ImageR a = bmode(pred_rf.data, dr);
  const ImageR b = bmode(target_rf.data, dr);
  MetricsReport m;
  m.ssim = ssim_db(a, b, dr);
  m.lbpd = lbpd(a, b);
  const IouBands iou = iou_bands(a, b);
  m.iou1 = iou.iou1;
  m.iou2 = iou.iou2;
  m.iou3 = iou.iou3;
  m.iou_mean = iou.mean;
  m.sidelobe_ratio = sidelobe_energy_ratio(pred_rf);
  return m;
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.ssim += r.ssim;
    m.lbpd += r.lbpd;
    m.iou1 += r.iou1;
    m.iou2 += r.iou2;
    m.iou3 += r.iou3;
    m.iou_mean += r.iou_mean;
    m.sidelobe_ratio += r.sidelobe_ratio;
  }
  const double n = static_cast<double>(reports.size());
  m.ssim /= n;
  m.lbpd /= n;
  m.iou1 /= n;
  m.iou2 /= n;
  m.iou3 /= n;
  m.iou_mean /= n;
  m.sidelobe_ratio /= n;
  return m;
}

}  // namespace psflab
