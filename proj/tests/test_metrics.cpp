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

#include <doctest.h>

#include "psflab/aberration.hpp"
#include "psflab/metrics.hpp"
#include "psflab/sigproc.hpp"
#include "support/testing.hpp"

using namespace psflab;
using namespace psflab::testing;

namespace {

// Windowed statistics evaluated directly at every valid position with the
// 2D Gaussian window.
double ssim_reference(const ImageR& a, const ImageR& b, double dr) {
  constexpr int k = 11;
  constexpr double sigma = 1.5;
  double wsum = 0.0;
  double w[k][k];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) wsum += w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * sigma * sigma));
  const double c1 = std::pow(0.01 * dr, 2), c2 = std::pow(0.03 * dr, 2);
  double total = 0.0;
  int count = 0;
  for (Index r = 0; r + k <= a.rows(); ++r)
    for (Index c = 0; c + k <= a.cols(); ++c) {
      double ma = 0, mb = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          ma += w[i][j] / wsum * a(r + i, c + j);
          mb += w[i][j] / wsum * b(r + i, c + j);
        }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double da = a(r + i, c + j) - ma, db = b(r + i, c + j) - mb;
          va += w[i][j] / wsum * da * da;
          vb += w[i][j] / wsum * db * db;
          cov += w[i][j] / wsum * da * db;
        }
      total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / count;
}

ImageR random_db(Rng& rng, Index n = 32) {
  // Mix of smooth log-compressed speckle and uniform noise.
  return rng.below(2) ? bmode(random_image(n, n, rng), 60.0) : random_image(n, n, rng, 0.0, 60.0);
}

}  // namespace

TEST_CASE("ssim window") {
  const Eigen::VectorXd w = ssim_window();
  CHECK(w.size() == 11);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(w[5] == w.maxCoeff());
  CHECK(w[0] == doctest::Approx(w[10]));
}

TEST_CASE("ssim_db against direct windowed evaluation") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ImageR a = random_db(rng, 20), b = random_db(rng, 20);
    CHECK(ssim_db(a, b) == doctest::Approx(ssim_reference(a, b, 60.0)).epsilon(1e-10));
  }
}

TEST_CASE("metric properties on random dB images") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const ImageR a = random_db(rng), b = random_db(rng);
    CHECK(ssim_db(a, a) == 1.0);
    CHECK(lbpd(a, a) == 0.0);
    const IouBands self = iou_bands(a, a);
    CHECK(self.iou1 == 1.0);
    CHECK(self.iou2 == 1.0);
    CHECK(self.iou3 == 1.0);
    CHECK(self.mean == 1.0);

    const double s = ssim_db(a, b);
    CHECK(s == ssim_db(b, a));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(lbpd(a, b) == lbpd(b, a));
    CHECK(lbpd(a, b) >= 0.0);
    const IouBands ab = iou_bands(a, b), ba = iou_bands(b, a);
    CHECK(ab.iou1 == ba.iou1);
    CHECK(ab.iou2 == ba.iou2);
    CHECK(ab.iou3 == ba.iou3);
    for (double v : {ab.iou1, ab.iou2, ab.iou3, ab.mean}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("lbpd: zero exactly when projections agree") {
  Rng rng(43);
  const ImageR a = random_db(rng);
  // Swapping rows keeps every column mean.
  ImageR b = a;
  b.row(3).swap(b.row(17));
  CHECK(lbpd(a, b) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  b(0, 0) += 1.0;
  CHECK(lbpd(a, b) == doctest::Approx(1.0 / a.rows()));
}

TEST_CASE("iou bands: hand case") {
  // a: band-1 = 4 centre pixels; b: 2 of those plus 2 others. iou1 = 2 / 6.
  ImageR a = ImageR::Constant(4, 4, 10.0), b = ImageR::Constant(4, 4, 10.0);
  a(1, 1) = a(1, 2) = a(2, 1) = a(2, 2) = 50.0;
  b(1, 1) = b(1, 2) = b(0, 0) = b(3, 3) = 50.0;
  const IouBands r = iou_bands(a, b);
  CHECK(r.iou1 == doctest::Approx(2.0 / 6.0));
  CHECK(r.iou2 == 1.0);  // empty in both
  CHECK(r.iou3 == doctest::Approx(10.0 / 14.0));
  CHECK(r.mean == doctest::Approx((2.0 / 6.0 + 1.0 + 10.0 / 14.0) / 3.0));
}

TEST_CASE("iou bands: band edges and permutation within a band") {
  CHECK(db_band(60.0) == 1);
  CHECK(db_band(40.0) == 1);
  CHECK(db_band(39.999) == 2);
  CHECK(db_band(20.0) == 2);
  CHECK(db_band(19.999) == 3);
  CHECK(db_band(0.0) == 3);
  Rng rng(44);
  const ImageR a = random_db(rng, 16);
  ImageR b = a;
  // Move values around inside each band: band membership is unchanged.
  for (Index r = 0; r < b.rows(); ++r)
    for (Index c = 0; c < b.cols(); ++c) {
      const int k = db_band(a(r, c));
      b(r, c) = k == 1 ? 40.0 + 20.0 * rng.uniform() : k == 2 ? 20.0 + 19.9 * rng.uniform() : 19.9 * rng.uniform();
    }
  const IouBands s = iou_bands(a, b);
  CHECK(s.mean == 1.0);
}

TEST_CASE("metrics reject mismatched inputs") {
  const Grid g = desk_grid(SimConfig{});
  const RealPatch db(g, RealKind::Decibel), rf(g, RealKind::RF);
  CHECK_THROWS_AS(ssim_db(db, rf), InvalidArgument);
  CHECK_THROWS_AS(lbpd(ImageR::Zero(4, 4), ImageR::Zero(4, 5)), InvalidArgument);
  CHECK_THROWS_AS(iou_bands(ImageR::Zero(4, 4), ImageR::Zero(5, 4)), InvalidArgument);
  CHECK_THROWS_AS(ssim_db(ImageR::Zero(8, 8), ImageR::Zero(8, 8)), InvalidArgument);
  Grid g2 = g;
  g2.x0 += g.dx;
  CHECK_THROWS_AS(lbpd(db, RealPatch(g2, RealKind::Decibel)), InvalidArgument);
}

TEST_CASE("mainlobe region and sidelobe ratio") {
  const Grid g = desk_grid(SimConfig{});
  // Gaussian envelope on a quarter-sample carrier: the -20 dB contour is known.
  RealPatch p(g, RealKind::RF);
  for (Index r = 0; r < g.nz; ++r)
    for (Index c = 0; c < g.nx; ++c)
      p.data(r, c) =
          std::exp(-0.5 * (std::pow((r - 32) / 3.0, 2) + std::pow((c - 32) / 5.0, 2))) * std::cos(kPi / 2 * (r - 32));
  const MainlobeRegion reg = mainlobe_region(p);
  // exp(-d^2/2) >= 0.1  <=>  d <= sqrt(2 ln 10) = 2.146 sigma.
  CHECK(reg.row0 == 32 - 6);
  CHECK(reg.row1 == 32 + 6);
  CHECK(reg.col0 == 32 - 10);
  CHECK(reg.col1 == 32 + 10);
  CHECK(reg.contains(32, 32));
  CHECK_FALSE(reg.contains(0, 0));

  double inside = 0.0, outside = 0.0;
  for (Index r = 0; r < g.nz; ++r)
    for (Index c = 0; c < g.nx; ++c) (reg.contains(r, c) ? inside : outside) += p.data(r, c) * p.data(r, c);
  CHECK(sidelobe_energy_ratio(p) == doctest::Approx(outside / inside));

  const SimConfig cfg;
  const RealPatch psf = simulate_psf(cfg, zero_profile(cfg), g);
  const MainlobeRegion pr = mainlobe_region(psf);
  CHECK(pr.contains(g.center_row(), g.center_col()));
  CHECK(sidelobe_energy_ratio(psf, pr) == sidelobe_energy_ratio(psf));
  CHECK_THROWS_AS(mainlobe_region(RealPatch(g, RealKind::RF)), InvalidArgument);
}

TEST_CASE("evaluate_psf and mean_report") {
  const SimConfig cfg;
  const Grid g = desk_grid(cfg);
  const RealPatch psf = simulate_psf(cfg, zero_profile(cfg), g);
  const MetricsReport self = evaluate_psf(psf, psf);
  CHECK(self.ssim == 1.0);
  CHECK(self.lbpd == 0.0);
  CHECK(self.iou_mean == 1.0);
  CHECK(self.sidelobe_ratio == sidelobe_energy_ratio(psf));
  MetricsReport other = self;
  other.ssim = 0.5;
  other.lbpd = 4.0;
  const MetricsReport m = mean_report({self, other});
  CHECK(m.ssim == doctest::Approx(0.75));
  CHECK(m.lbpd == doctest::Approx(2.0));
  const auto j = m.to_json();
  CHECK(j.contains("iou_mean"));
  CHECK(j.at("ssim").get<double>() == doctest::Approx(0.75));
}
