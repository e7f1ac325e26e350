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

#include <numeric>
#include <set>

#include "psflab/aberration.hpp"
#include "psflab/io/tensor_file.hpp"
#include "psflab/nn/adam.hpp"
#include "psflab/nn/checkpoint.hpp"
#include "psflab/nn/train.hpp"
#include "psflab/sigproc.hpp"
#include "psflab/speckle.hpp"
#include "support/grad_cases.hpp"

using namespace psflab;
using namespace psflab::nn;
using namespace psflab::testing;
using cd = std::complex<double>;

TEST_CASE("gradient suite: every op, chain, loss and network") {
  for (const auto& gc : grad_cases()) {
    const GradCheck r = gc.run();
    INFO(gc.name << " worst " << r.worst);
    CHECK(r.max_rel_err <= 1e-3);
    CHECK(r.min_grad_norm > 1e-8);
  }
}

TEST_CASE("gradient suite: the checker catches a wrong backward pass") {
  // y = x^2 with the gradient off by a factor of two.
  auto bad_square = [](const TensorD& x) {
    return make_result<double>("bad_square", x.shape(), x.value().square(), {x}, [x](Node<double>& self) {
      x.node()->ensure_grad() += 4.0 * x.value() * self.grad;
    });
  };
  Rng rng(71);
  const GradCheck r =
      grad_check([&](const auto& in) { return sum(bad_square(in[0])); }, {random_tensor({1, 4, 4}, rng)});
  CHECK(r.max_rel_err > 0.3);
}

TEST_CASE("conv2d: identity kernel, shapes and errors") {
  Rng rng(72);
  const TensorD x = random_tensor({2, 6, 5}, rng);
  TensorD::Array w = TensorD::Array::Zero(2 * 2 * 9);
  w[0 * 18 + 0 * 9 + 4] = 1.0;  // out 0 <- in 0 centre tap
  w[1 * 18 + 1 * 9 + 4] = 1.0;  // out 1 <- in 1
  const TensorD y = conv2d(x, TensorD::from({2, 2, 9}, w), TensorD::zeros({2, 1, 1}));
  CHECK(y.shape() == x.shape());
  CHECK((y.value() - x.value()).abs().maxCoeff() == 0.0);
  const TensorD s2 = conv2d(x, TensorD::from({2, 2, 9}, w), TensorD::zeros({2, 1, 1}), 2);
  CHECK(s2.shape() == Shape{2, 3, 3});
  CHECK(s2.channel(1)(1, 2) == x.channel(1)(2, 4));
  CHECK_THROWS_AS(conv2d(x, TensorD::zeros({2, 3, 9}), TensorD::zeros({2, 1, 1})), InvalidArgument);
  CHECK_THROWS_AS(conv2d(x, TensorD::zeros({2, 2, 4}), TensorD::zeros({2, 1, 1})), InvalidArgument);
  CHECK_THROWS_AS(conv2d(x, TensorD::zeros({2, 2, 9}), TensorD::zeros({3, 1, 1})), InvalidArgument);
  CHECK_THROWS_AS(conv2d(x, TensorD::zeros({2, 2, 9}), TensorD::zeros({2, 1, 1}), 3), InvalidArgument);
  CHECK_THROWS_AS(add(x, random_tensor({1, 6, 5}, rng)), InvalidArgument);
}

TEST_CASE("complex conv: algebra") {
  Rng rng(73);
  // Imaginary weight zero: real and imaginary parts convolve independently.
  const TensorD x = random_tensor({2, 6, 6}, rng);
  const TensorD wr = random_tensor({1, 1, 9}, rng), zero = TensorD::zeros({1, 1, 9}), b0 = TensorD::zeros({1, 1, 1});
  const TensorD y = complex_conv2d(x, wr, zero, b0, b0);
  CHECK((y.channel(0) - conv2d(slice_channels(x, 0, 1), wr, b0).channel(0)).abs().maxCoeff() < 1e-14);
  CHECK((y.channel(1) - conv2d(slice_channels(x, 1, 1), wr, b0).channel(0)).abs().maxCoeff() < 1e-14);

  // 1x1 weight i rotates by 90 degrees: (re, im) -> (-im, re).
  const TensorD one_i = complex_conv2d(x, TensorD::zeros({1, 1, 1}), TensorD::from({1, 1, 1}, TensorD::Array::Ones(1)), b0, b0);
  CHECK((one_i.channel(0) + x.channel(1)).abs().maxCoeff() == 0.0);
  CHECK((one_i.channel(1) - x.channel(0)).abs().maxCoeff() == 0.0);

  // Linearity in a complex scalar with zero bias.
  const TensorD z = random_tensor({4, 8, 8}, rng);  // two complex channels
  const TensorD w_re = random_tensor({3, 2, 9}, rng), w_im = random_tensor({3, 2, 9}, rng);
  const TensorD bz = TensorD::zeros({3, 1, 1});
  const cd alpha(0.7, -1.3);
  auto times = [](const TensorD& t, cd a) {
    const Index n = t.shape().c / 2;
    TensorD out = TensorD::zeros(t.shape());
    for (Index c = 0; c < n; ++c) {
      out.channel(c) = a.real() * t.channel(c) - a.imag() * t.channel(n + c);
      out.channel(n + c) = a.real() * t.channel(n + c) + a.imag() * t.channel(c);
    }
    return out;
  };
  const TensorD lhs = complex_conv2d(times(z, alpha), w_re, w_im, bz, bz);
  const TensorD rhs = times(complex_conv2d(z, w_re, w_im, bz, bz), alpha);
  CHECK((lhs.value() - rhs.value()).abs().maxCoeff() < 1e-6);
}

TEST_CASE("bmode chain") {
  const SimConfig cfg;
  const Grid g = desk_grid(cfg);
  SimConfig ab = cfg;
  ab.max_phase_error = kPi / 4;
  const RealPatch psf = simulate_psf(ab, generate_phase_screen(ab, 5), g);
  const BmodeParams p = BmodeParams::from(cfg, g);
  const TensorD y = tensor_from_image<double>(psf.data);
  const TensorD db = bmode_chain(y, p);
  CHECK(db.value().maxCoeff() == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(db.value().minCoeff() >= 0.0);
  // Agrees with the reference B-mode image.
  CHECK((real_image(db) - bmode(psf.data, 60.0)).abs().maxCoeff() < 1e-3);
  // Global positive scaling leaves the output unchanged.
  for (double s : {1e-3, 3.0, 250.0})
    CHECK((bmode_chain(scale(y, s), p).value() - db.value()).abs().maxCoeff() < 1e-6);
  // The k-space chain on fft2(y) reproduces the RF chain.
  const TensorD k = tensor_from_image<double>(fft2_centered(psf.data));
  const TensorD dbk = bmode_chain_kspace(k, p);
  CHECK(std::sqrt((dbk.value() - db.value()).square().mean()) < 1e-4);
}

TEST_CASE("tensor basics") {
  const TensorD s = TensorD::scalar(2.5);
  CHECK(s.item() == 2.5);
  CHECK(Shape{2, 3, 4}.numel() == 24);
  CHECK(Shape{2, 3, 4}.str() == "(2, 3, 4)");
  Rng rng(74);
  const TensorD x = random_tensor({1, 3, 3}, rng);
  const TensorD y = sum(square(x));
  y.backward();
  CHECK((x.node()->grad - 2.0 * x.value()).abs().maxCoeff() < 1e-15);
  // A second backward accumulates.
  y.backward();
  CHECK((x.node()->grad - 4.0 * x.value()).abs().maxCoeff() < 1e-15);
  x.zero_grad();
  CHECK(x.node()->grad.isZero(0.0));
  CHECK_FALSE(x.detach().requires_grad());
  CHECK_FALSE(add(x.detach(), x.detach()).node()->backward);
  TensorD::Array bad(1);
  bad[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(scale(TensorD::from({1, 1, 1}, bad), 1.0), NumericError);
}

TEST_CASE("losses") {
  const SimConfig cfg;
  const Grid g = grid_from_config(cfg, 16, 16, GridSpacing::desk());
  const BmodeParams p = BmodeParams::from(cfg, g);
  const RealPatch psf = simulate_psf(cfg, zero_profile(cfg), g);
  for (Domain d : {Domain::RF, Domain::KSpace}) {
    const TensorD y = d == Domain::RF ? tensor_from_image<double>(psf.data) : tensor_from_image<double>(fft2_centered(psf.data));
    for (LossKind k : kAllLossKinds) {
      INFO(to_string(k) << " " << to_string(d));
      const LossFunction<double> loss(k, d, p);
      CHECK(loss(y, y).item() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(loss(scale(y, 0.5), y).item() > (is_bmode(k) ? -1e-9 : 1e-6));
    }
  }
  const LossFunction<double> l2(LossKind::L2, Domain::RF, p);
  TensorD::Array a(4), b(4);
  a << 1, 2, 3, 4;
  b << 0, 2, 5, 1;
  CHECK(l2(TensorD::from({1, 2, 2}, a), TensorD::from({1, 2, 2}, b)).item() == doctest::Approx((1 + 0 + 4 + 9) / 4.0));
  const LossFunction<double> l1(LossKind::L1, Domain::RF, p);
  CHECK(l1(TensorD::from({1, 2, 2}, a), TensorD::from({1, 2, 2}, b)).item() == doctest::Approx((1 + 0 + 2 + 3) / 4.0));
  CHECK_THROWS_AS(l1(TensorD::zeros({1, 2, 2}), TensorD::zeros({1, 2, 3})), InvalidArgument);

  for (LossKind k : kAllLossKinds) CHECK(parse_loss_kind(to_string(k)) == k);
  CHECK(parse_loss_kind("L1_Bmode") == LossKind::L1_Bmode);
  CHECK_THROWS_AS(parse_loss_kind("l3"), InvalidArgument);
  CHECK(parse_domain("kspace") == Domain::KSpace);
  CHECK_THROWS_AS(parse_domain("image"), InvalidArgument);
}

TEST_CASE("adam and learning rate schedule") {
  CHECK(step_decay_lr(1e-3, 0) == 1e-3);
  CHECK(step_decay_lr(1e-3, 9) == 1e-3);
  CHECK(step_decay_lr(1e-3, 10) == doctest::Approx(1e-4));
  CHECK(step_decay_lr(1e-3, 25) == doctest::Approx(1e-5));
  CHECK(step_decay_lr(1e-3, 25, 0) == 1e-3);

  // Zero gradient leaves parameters unchanged.
  TensorD::Array v(3);
  v << 1, -2, 3;
  std::vector<TensorD> params{TensorD::from({1, 1, 3}, v, true)};
  params[0].grad().setZero();
  AdamState<double> st;
  adam_step<double>(params, st, 0.1);
  CHECK((params[0].value() - v).abs().maxCoeff() == 0.0);

  // Scalar quadratic (x - 3)^2 from x = -2 converges within 500 steps.
  std::vector<TensorD> x{TensorD::from({1, 1, 1}, TensorD::Array::Constant(1, -2.0), true)};
  AdamState<double> s2;
  for (int i = 0; i < 500; ++i) {
    x[0].zero_grad();
    square(add_scalar(x[0], -3.0)).backward();
    adam_step<double>(x, s2, 0.05);
  }
  CHECK(x[0].item() == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(s2.t == 500);
}

TEST_CASE("unet: shapes, determinism and parameters") {
  for (Domain d : {Domain::RF, Domain::KSpace}) {
    ModelConfig mc;
    mc.domain = d;
    const UNet<float> net(mc, 3);
    const Index ch = d == Domain::RF ? 1 : 2;
    CHECK(net.io_channels() == ch);
    Rng rng(75);
    Tensor<float>::Array in(ch * 64 * 64);
    for (Index i = 0; i < in.size(); ++i) in[i] = static_cast<float>(rng.normal());
    const Tensor<float> x = Tensor<float>::from({ch, 64, 64}, in);
    const Tensor<float> y1 = net.forward(x), y2 = net.forward(x);
    CHECK(y1.shape() == Shape{ch, 64, 64});
    CHECK(y1.value().allFinite());
    CHECK((y1.value() == y2.value()).all());
    CHECK((UNet<float>(mc, 3).forward(x).value() == y1.value()).all());
    CHECK_FALSE((UNet<float>(mc, 4).forward(x).value() == y1.value()).all());

    std::set<std::string> names;
    Index count = 0;
    for (const auto& p : net.parameters()) {
      names.insert(p.name);
      count += p.tensor.numel();
    }
    CHECK(names.size() == net.parameters().size());
    CHECK(count == net.parameter_count());
    CHECK_THROWS_AS(net.forward(Tensor<float>::zeros({ch, 30, 30})), InvalidArgument);
  }
}

TEST_CASE("checkpoints") {
  TempDir tmp("ckpt");
  ModelConfig mc;
  mc.levels = 2;
  mc.base_channels = 4;
  mc.domain = Domain::KSpace;
  const UNet<float> net(mc, 11);
  const auto manifest = save_checkpoint(tmp.path(), "m", net, {{"note", "x"}});
  const UNet<float> back = load_checkpoint(manifest);
  CHECK(back.config() == mc);
  const Tensor<float> x = Tensor<float>::from({2, 8, 8}, Tensor<float>::Array::LinSpaced(128, -1, 1));
  CHECK((back.forward(x).value() == net.forward(x).value()).all());

  UNet<float> other(mc, 12);
  copy_weights(net, other);
  CHECK((other.forward(x).value() == net.forward(x).value()).all());
  ModelConfig wider = mc;
  wider.base_channels = 8;
  UNet<float> mismatch(wider, 1);
  CHECK_THROWS_AS(copy_weights(net, mismatch), InvalidArgument);

  auto bytes = io::read_bytes(tmp.path() / "m.ut");
  bytes[40] ^= 0x01;
  io::write_bytes(tmp.path() / "m.ut", bytes);
  CHECK_THROWS_AS(load_checkpoint(manifest), IoError);
}

namespace {

std::vector<RealPatch> small_psfs(int n, Index size = 16) {
  const SimConfig cfg;
  const Grid g = grid_from_config(cfg, size, size, GridSpacing::desk());
  std::vector<RealPatch> out;
  for (int i = 0; i < n; ++i) {
    SimConfig c = cfg;
    c.max_phase_error = kAberrationLevels[i % 4];
    out.push_back(simulate_psf(c, generate_phase_screen(c, 80 + i), g));
  }
  return out;
}

ModelConfig tiny_model(Domain d = Domain::RF) {
  ModelConfig mc;
  mc.levels = 2;
  mc.base_channels = 4;
  mc.domain = d;
  return mc;
}

}  // namespace

TEST_CASE("training: schedule, determinism and checkpoints") {
  TempDir tmp("train");
  const auto psfs = small_psfs(3);
  TrainConfig tc;
  tc.epochs = 3;
  tc.decay_every = 2;
  tc.repeats = 2;
  tc.seed = 9;
  tc.checkpoint_dir = tmp.path();
  UNet<float> a(tiny_model(), 1);
  std::vector<StepInfo> steps;
  const TrainLog log = train(a, psfs, SimConfig{}, tc, [&](const StepInfo& s) { steps.push_back(s); });
  CHECK(log.losses.size() == 18);
  CHECK(steps.size() == 18);
  CHECK(steps.back().step == 17);
  REQUIRE(log.epoch_lr.size() == 3);
  CHECK(log.epoch_lr[1] == tc.lr0);
  CHECK(log.epoch_lr[2] == doctest::Approx(tc.lr0 * 0.1));
  for (int e = 0; e < 3; ++e) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "epoch_%03d", e);
    CHECK(fs::exists(tmp.path() / (std::string(stem) + ".ut")));
    CHECK(fs::exists(tmp.path() / (std::string(stem) + ".json")));
  }

  UNet<float> b(tiny_model(), 1);
  tc.checkpoint_dir.clear();
  const TrainLog log_b = train(b, psfs, SimConfig{}, tc);
  CHECK(log_b.losses == log.losses);
  const auto pa = a.parameters(), pb = b.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK((pa[i].tensor.value() == pb[i].tensor.value()).all());

  // Scatterers are redrawn at every step unless pinned.
  CHECK(training_scatterer_seed(tc, 0, 0) != training_scatterer_seed(tc, 1, 0));
  tc.fixed_scatterers = true;
  CHECK(training_scatterer_seed(tc, 0, 1) == training_scatterer_seed(tc, 5, 1));
}

TEST_CASE("training: divergence reports step, rate and loss") {
  const auto psfs = small_psfs(1);
  TrainConfig tc;
  tc.lr0 = 1e30;
  tc.epochs = 5;
  tc.loss = LossKind::L2;
  UNet<float> net(tiny_model(), 2);
  try {
    train(net, psfs, SimConfig{}, tc);
    FAIL("expected divergence");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("step") != std::string::npos);
    CHECK(msg.find("lr 1e+30") != std::string::npos);
    CHECK(msg.find("l2") != std::string::npos);
  }
  CHECK_THROWS_AS(train(net, {}, SimConfig{}, TrainConfig{}), InvalidArgument);
}

TEST_CASE("training: overfit loss curve decreases after smoothing") {
  const auto psfs = small_psfs(1, 32);
  TrainConfig tc;
  tc.epochs = 1;
  tc.repeats = 400;
  tc.fixed_scatterers = true;
  tc.seed = 4;
  tc.loss = LossKind::L1_Bmode;
  ModelConfig mc;
  mc.levels = 2;
  mc.base_channels = 8;
  UNet<float> net(mc, 5);
  const TrainLog log = train(net, psfs, SimConfig{}, tc);
  std::vector<double> smooth;
  for (std::size_t i = 0; i + 50 <= log.losses.size(); i += 50)
    smooth.push_back(std::accumulate(log.losses.begin() + i, log.losses.begin() + i + 50, 0.0) / 50.0);
  for (std::size_t i = 1; i < smooth.size(); ++i) CHECK(smooth[i] <= smooth[i - 1]);
  CHECK(smooth.back() < 0.5 * smooth.front());
}

TEST_CASE("model input and output transforms") {
  const auto psfs = small_psfs(1);
  const RealPatch speckle = training_speckle(psfs[0], 3);
  const Tensor<float> rf = model_input(speckle, Domain::RF);
  CHECK(rf.shape() == Shape{1, 16, 16});
  CHECK(std::sqrt(rf.value().square().mean()) == doctest::Approx(1.0).epsilon(1e-5));
  const Tensor<float> k = model_input(speckle, Domain::KSpace);
  CHECK(k.shape() == Shape{2, 16, 16});
  CHECK((output_to_rf(k, Domain::KSpace) - real_image(rf)).abs().maxCoeff() < 1e-5);
  CHECK((output_to_rf(model_target(psfs[0], Domain::KSpace), Domain::KSpace) - psfs[0].data).abs().maxCoeff() < 1e-5);
  CHECK_THROWS_AS(model_input(RealPatch(psfs[0].grid, RealKind::RF), Domain::RF), InvalidArgument);
}
