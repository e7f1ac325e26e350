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

#include <set>

#include "psflab/aberration.hpp"
#include "psflab/dataset.hpp"
#include "psflab/io/tensor_file.hpp"
#include "psflab/sigproc.hpp"
#include "psflab/speckle.hpp"
#include "support/testing.hpp"

using namespace psflab;
using namespace psflab::testing;

TEST_CASE("fast_fft_size is the smallest 5-smooth size") {
  auto smooth = [](Index n) {
    for (Index p : {2, 3, 5})
      while (n % p == 0) n /= p;
    return n == 1;
  };
  for (Index n = 1; n <= 600; ++n) {
    const Index m = fast_fft_size(n);
    REQUIRE(m >= n);
    REQUIRE(smooth(m));
    for (Index k = n; k < m; ++k) REQUIRE_FALSE(smooth(k));
  }
}

TEST_CASE("convolve matches direct summation on random shapes") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const ImageR f = random_image(1 + rng.below(12), 1 + rng.below(12), rng);
    const ImageR h = random_image(1 + rng.below(9), 1 + rng.below(9), rng);
    CHECK(rel_rms(convolve(f, h, Crop::Full), direct_convolve_full(f, h)) < 1e-12);
    CHECK(rel_rms(convolve(f, h, Crop::Same), direct_convolve_same(f, h)) < 1e-12);
  }
}

TEST_CASE("convolve 64x64 against the O(N^4) oracle") {
  Rng rng(22);
  const ImageR f = random_image(64, 64, rng), h = random_image(64, 64, rng);
  CHECK(rel_rms(convolve(f, h, Crop::Same), direct_convolve_same(f, h)) < 1e-5);
  CHECK(rel_rms(convolve(f, h, Crop::Full), direct_convolve_full(f, h)) < 1e-5);
}

TEST_CASE("convolve: delta kernel is the identity") {
  Rng rng(23);
  const ImageR f = random_image(17, 20, rng);
  ImageR delta = ImageR::Zero(9, 8);
  delta(4, 4) = 1.0;
  CHECK((convolve(f, delta) - f).abs().maxCoeff() < 1e-14);
}

TEST_CASE("convolve: linearity") {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const ImageR f1 = random_image(32, 32, rng), f2 = random_image(32, 32, rng), h = random_image(15, 15, rng);
    const double a = rng.normal(), b = rng.normal();
    CHECK(rel_rms(convolve(a * f1 + b * f2, h), a * convolve(f1, h) + b * convolve(f2, h)) < 1e-6);
  }
}

TEST_CASE("convolve: shift commutation on interior pixels") {
  Rng rng(25);
  const ImageR f = random_image(40, 40, rng), h = random_image(7, 7, rng);
  ImageR fs = ImageR::Zero(40, 40);
  fs.block(0, 1, 40, 39) = f.block(0, 0, 40, 39);  // shift right by one column
  const ImageR g = convolve(f, h), gs = convolve(fs, h);
  const ImageR diff = gs.block(4, 5, 32, 31) - g.block(4, 4, 32, 31);
  CHECK(diff.abs().maxCoeff() <= 1e-12 * g.abs().maxCoeff());
}

TEST_CASE("convolve: convolution theorem") {
  Rng rng(26);
  const ImageR f = random_image(24, 20, rng), h = random_image(9, 11, rng);
  const ImageR g = convolve(f, h, Crop::Full);
  auto padded = [&](const ImageR& x) {
    ImageC p = ImageC::Zero(g.rows(), g.cols());
    p.block(0, 0, x.rows(), x.cols()) = x.cast<std::complex<double>>();
    fft2_inplace(p, false);
    return p;
  };
  ImageC G = g.cast<std::complex<double>>();
  fft2_inplace(G, false);
  const ImageC prod = padded(f) * padded(h);
  CHECK(std::sqrt((G - prod).abs2().sum() / prod.abs2().sum()) < 1e-5);
}

TEST_CASE("convolve patches: grids and errors") {
  const SimConfig cfg;
  const Grid g = desk_grid(cfg);
  const RealPatch f = generate_scatterers(g, 1);
  const RealPatch h = simulate_psf(cfg, zero_profile(cfg), grid_from_config(cfg, 16, 16, GridSpacing::desk()));
  const RealPatch same = convolve(f, h);
  CHECK(same.grid == g);
  CHECK(same.kind == RealKind::RF);
  const RealPatch full = convolve(f, h, Crop::Full);
  CHECK(full.grid.nx == 64 + 16 - 1);
  CHECK(full.grid.x0 == doctest::Approx(g.x0 - 8 * g.dx));
  CHECK(full.grid.z0 == doctest::Approx(g.z0 - 8 * g.dz));
  CHECK(convolve(f, h, Crop::Same, true).data.abs().maxCoeff() == doctest::Approx(1.0));
  const RealPatch other = generate_scatterers(grid_from_config(cfg, 8, 8, GridSpacing::paper()), 1);
  CHECK_THROWS_AS(convolve(f, other), InvalidArgument);
}

TEST_CASE("scatterers: Gaussian moments and determinism") {
  const Grid g = grid_from_config(SimConfig{}, 256, 256);
  const double n = 256.0 * 256.0;
  for (std::uint64_t seed : {3ULL, 4ULL, 99ULL}) {
    const RealPatch s = generate_scatterers(g, seed);
    CHECK(s.kind == RealKind::Scatterer);
    const double mean = s.data.mean();
    CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
    CHECK(std::abs((s.data - mean).square().mean() - 1.0) < 0.1);
    CHECK((generate_scatterers(g, seed).data == s.data).all());
  }
  const RealPatch d = delta_scatterers(g);
  CHECK(d.data.sum() == 1.0);
  CHECK(d.data(g.center_row(), g.center_col()) == 1.0);
}

TEST_CASE("pairs: delta scatterer reproduces the PSF") {
  const SimConfig cfg;
  const TrainingPair p = make_pair(cfg, desk_grid(cfg), 1, 2, {.delta_scatterer = true});
  CHECK((p.speckle.data - p.psf.data).abs().maxCoeff() < 1e-12);
}

TEST_CASE("pairs: speckle spectrum lies within the PSF spectral support") {
  const SimConfig cfg;
  const TrainingPair p = make_pair(cfg, desk_grid(cfg), 1, 2, {.crop = Crop::Full});
  const Index rows = p.speckle.data.rows(), cols = p.speckle.data.cols();
  ImageC hs = ImageC::Zero(rows, cols);
  hs.block(0, 0, p.psf.data.rows(), p.psf.data.cols()) = p.psf.data.cast<std::complex<double>>();
  ImageC gs = p.speckle.data.cast<std::complex<double>>();
  fft2_inplace(hs, false);
  fft2_inplace(gs, false);
  const ImageR hpow = hs.abs2(), gpow = gs.abs2();
  const double cut = 1e-6 * hpow.maxCoeff();
  const double outside = (hpow < cut).select(gpow, 0.0).sum();
  CHECK(outside / gpow.sum() < 1e-4);
  CHECK((hpow < cut).count() > 0);
}

TEST_CASE("pairs: dataset seeds and levels") {
  const SimConfig cfg;
  std::set<double> levels;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double l = aberration_level_for(17, i);
    CHECK(std::find(kAberrationLevels.begin(), kAberrationLevels.end(), l) != kAberrationLevels.end());
    levels.insert(l);
    CHECK(profile_seed_for(17, i) != scatterer_seed_for(17, i));
  }
  CHECK(levels.size() == 4);
  const TrainingPair a = dataset_pair(cfg, desk_grid(cfg), 17, 3);
  CHECK(a.aberration_level == aberration_level_for(17, 3));
  CHECK(a.cfg.max_phase_error == a.aberration_level);
}

TEST_CASE("dataset: bytes independent of worker count") {
  TempDir tmp("dataset");
  const SimConfig cfg;
  const Grid g = grid_from_config(cfg, 24, 24, GridSpacing::desk());
  const Manifest m1 = make_dataset(cfg, g, 9, 5, 1, tmp.path() / "a");
  const Manifest m3 = make_dataset(cfg, g, 9, 5, 3, tmp.path() / "b");
  CHECK(m1.complete);
  CHECK(m1.pairs.size() == 9);
  CHECK(m1.pairs == m3.pairs);
  CHECK(io::read_bytes(tmp.path() / "a" / "manifest.json") == io::read_bytes(tmp.path() / "b" / "manifest.json"));
  for (const auto& e : m1.pairs) {
    CHECK(io::read_bytes(tmp.path() / "a" / e.psf_file) == io::read_bytes(tmp.path() / "b" / e.psf_file));
    CHECK(io::read_bytes(tmp.path() / "a" / e.speckle_file) == io::read_bytes(tmp.path() / "b" / e.speckle_file));
  }

  const Manifest back = read_manifest(tmp.path() / "a");
  CHECK(back.pairs == m1.pairs);
  CHECK(back.cfg == cfg);
  CHECK(back.grid == g);
  const TrainingPair p4 = dataset_pair(cfg, g, 5, 4);
  CHECK((load_psf(tmp.path() / "a", back, 4).data - p4.psf.data).abs().maxCoeff() < 1e-6);
  CHECK((load_speckle(tmp.path() / "a", back, 4).data - p4.speckle.data).abs().maxCoeff() < 1e-5);

  // Corrupting a pair file is caught on load.
  auto bytes = io::read_bytes(tmp.path() / "a" / back.pairs[2].psf_file);
  bytes[bytes.size() - 3] ^= 0x40;
  io::write_bytes(tmp.path() / "a" / back.pairs[2].psf_file, bytes);
  CHECK_THROWS_AS(load_psf(tmp.path() / "a", back, 2), IoError);

  io::write_text(tmp.path() / "a" / "manifest.json", "{ not json");
  CHECK_THROWS_AS(read_manifest(tmp.path() / "a"), IoError);
  CHECK_THROWS_AS(read_manifest(tmp.path() / "missing"), IoError);
}
