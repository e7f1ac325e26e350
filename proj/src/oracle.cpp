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

#include "psflab/oracle.hpp"

#include <cmath>

#include "psflab/rng.hpp"
#include "psflab/sigproc.hpp"

namespace psflab {

RealPatch wiener_recover_psf(const RealPatch& speckle, const RealPatch& scatterers, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("wiener_recover_psf: eps must be positive");
  if (!speckle.grid.same_spacing(scatterers.grid)) throw InvalidArgument("wiener_recover_psf: grid spacing mismatch");
  check_patch(speckle);
  check_patch(scatterers);

  const Grid& fg = scatterers.grid;
  const Index hz = fg.nz, hx = fg.nx;
  // Index of the speckle's first sample in full-convolution coordinates.
  const Index oz = fg.nz / 2 + std::llround((speckle.grid.z0 - fg.z0) / fg.dz);
  const Index ox = fg.nx / 2 + std::llround((speckle.grid.x0 - fg.x0) / fg.dx);
  if (oz < 0 || ox < 0) throw InvalidArgument("wiener_recover_psf: speckle lies outside the convolution support");

  const Index pz = fast_fft_size(std::max(fg.nz + hz - 1, oz + speckle.grid.nz));
  const Index px = fast_fft_size(std::max(fg.nx + hx - 1, ox + speckle.grid.nx));
  ImageC G = ImageC::Zero(pz, px);
  ImageC F = ImageC::Zero(pz, px);
  G.block(oz, ox, speckle.grid.nz, speckle.grid.nx) = speckle.data.cast<std::complex<double>>();
  F.topLeftCorner(fg.nz, fg.nx) = scatterers.data.cast<std::complex<double>>();
  fft2_inplace(G, false);
  fft2_inplace(F, false);

  const ImageR power = F.abs2();
  const double floor = eps * power.maxCoeff();
  if (!(floor > 0.0)) throw InvalidArgument("wiener_recover_psf: scatterer map is all zero");
  ImageC H = G * F.conjugate() / (power + floor).cast<std::complex<double>>();
  fft2_inplace(H, true);

  RealPatch out(fg, RealKind::RF, H.real().topLeftCorner(hz, hx) / static_cast<double>(pz * px));
  const double peak = out.data.abs().maxCoeff();
  if (peak > 0.0) out.data /= peak;
  return out;
}

OracleReport run_oracle_check(const SimConfig& cfg, const Grid& grid, std::uint64_t seed, double eps, double min_ssim,
                              double min_iou) {
  OracleReport rep;
  rep.eps = eps;
  rep.min_ssim = min_ssim;
  rep.min_iou = min_iou;
  rep.pass = true;
  for (std::size_t k = 0; k < kAberrationLevels.size(); ++k) {
    SimConfig c = cfg;
    c.max_phase_error = kAberrationLevels[k];
    OracleCase oc;
    oc.aberration_level = c.max_phase_error;
    oc.profile_seed = derive_seed(seed, 2 * k);
    oc.scatterer_seed = derive_seed(seed, 2 * k + 1);
    const TrainingPair pair =
        make_pair(c, grid, oc.profile_seed, oc.scatterer_seed, PairOptions{false, Crop::Full});
    const RealPatch f = generate_scatterers(grid, oc.scatterer_seed);
    const RealPatch rec = wiener_recover_psf(pair.speckle, f, eps);
    const ImageR a = bmode(rec.data, cfg.dynamic_range);
    const ImageR b = bmode(pair.psf.data, cfg.dynamic_range);
    oc.ssim = ssim_db(a, b, cfg.dynamic_range);
    oc.iou_mean = iou_bands(a, b).mean;
    oc.pass = oc.ssim >= min_ssim && oc.iou_mean >= min_iou;
    rep.pass = rep.pass && oc.pass;
    rep.cases.push_back(oc);
  }
  return rep;
}

}  // namespace psflab
