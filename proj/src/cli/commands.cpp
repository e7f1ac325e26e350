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

#include "psflab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "psflab/aberration.hpp"
#include "psflab/config_file.hpp"
#include "psflab/dataset.hpp"
#include "psflab/experiment.hpp"
#include "psflab/io/hash.hpp"
#include "psflab/io/pgm.hpp"
#include "psflab/io/tensor_file.hpp"
#include "psflab/metrics.hpp"
#include "psflab/nn/checkpoint.hpp"
#include "psflab/oracle.hpp"
#include "psflab/serialize.hpp"
#include "psflab/sigproc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace psflab::cli {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
};

struct GridOptions {
  Index nx = 64;
  Index nz = 64;
  std::string spacing = "desk";

  void add_to(CLI::App* app) {
    app->add_option("--nx", nx, "Lateral samples")->check(CLI::PositiveNumber);
    app->add_option("--nz", nz, "Axial samples")->check(CLI::PositiveNumber);
    app->add_option("--spacing", spacing, "Sample spacing preset")->check(CLI::IsMember({"desk", "paper"}));
  }
  Grid grid(const SimConfig& cfg) const {
    return grid_from_config(cfg, nx, nz, spacing == "paper" ? GridSpacing::paper() : GridSpacing::desk());
  }
};

class Context {
 public:
  Context(const GlobalOptions& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  SimConfig config(const std::optional<std::string>& phase = std::nullopt) const {
    SimConfig cfg = g_.config_path.empty() ? SimConfig{} : load_config(g_.config_path);
    apply_env_overrides(cfg);
    for (const auto& kv : g_.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError(ConfigErrorCode::Syntax, "--set expects KEY=VALUE, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (phase) set_config_value(cfg, "max_phase_error", *phase);
    for (const auto& w : cfg.validate()) err_ << "warning: " << w << '\n';
    return cfg;
  }

  fs::path out_dir() const {
    fs::path p(g_.out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError(p.string(), ec.message());
    return p;
  }

  std::uint64_t seed() const { return g_.seed; }
  std::ostream& out() const { return out_; }
  std::ostream& err() const { return err_; }

  /// run.json: seed, config hash and content hashes of the inputs.
  void write_run_report(const std::string& command, const SimConfig* cfg, const std::vector<fs::path>& inputs,
                        const json& extra = json::object()) const {
    json in = json::array();
    for (const auto& p : inputs) in.push_back({{"path", p.generic_string()}, {"git_blob", io::git_blob_hash(p)}});
    json report = {{"command", command}, {"seed", g_.seed}, {"inputs", in}, {"extra", extra}};
    if (cfg) {
      report["config"] = *cfg;
      report["config_hash"] = io::sha1_hex(to_config_text(*cfg));
    }
    io::write_text(out_dir() / "run.json", report.dump(2) + "\n");
  }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string pair_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return buf;
}

Grid unit_grid(const ImageR& img) {
  Grid g;
  g.nx = img.cols();
  g.nz = img.rows();
  g.dx = g.dz = 1.0;
  return g;
}

ImageR read_rf(const fs::path& p) { return io::to_real_image(io::read_tensor_file(p)); }

// Files in a directory with the .ut extension, sorted by name.
std::vector<fs::path> tensor_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec))
    if (it->is_regular_file() && it->path().extension() == ".ut") files.push_back(it->path());
  if (ec) throw IoError(dir.string(), ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_screen(const Context& ctx, const std::optional<std::string>& phase) {
  const SimConfig cfg = ctx.config(phase);
  const AberrationProfile prof = generate_phase_screen(cfg, ctx.seed());
  const fs::path out = ctx.out_dir();
  io::write_tensor_file(out / "screen.ut", io::from_vector(prof.delays));
  const Eigen::VectorXd ph = prof.phases(cfg.fc);
  json j = {{"seed", prof.seed},
            {"max_phase_error", prof.max_phase_error},
            {"corr_length", prof.corr_length},
            {"delays_s", std::vector<double>(prof.delays.data(), prof.delays.data() + prof.delays.size())},
            {"phases_rad", std::vector<double>(ph.data(), ph.data() + ph.size())}};
  io::write_text(out / "screen.json", j.dump(2) + "\n");
  ctx.write_run_report("screen", &cfg, {});
  ctx.out() << "screen: " << prof.delays.size() << " elements, max |phase| " << ph.cwiseAbs().maxCoeff() << " rad -> "
            << (out / "screen.ut").generic_string() << '\n';
  return kOk;
}

int cmd_psf(const Context& ctx, const GridOptions& go, const std::optional<std::string>& phase) {
  const SimConfig cfg = ctx.config(phase);
  const Grid grid = go.grid(cfg);
  const RealPatch psf = simulate_psf(cfg, generate_phase_screen(cfg, ctx.seed()), grid);
  const RealPatch db = bmode(psf, cfg.dynamic_range);
  const fs::path out = ctx.out_dir();
  io::write_tensor_file(out / "psf.ut", io::from_image(psf.data));
  io::write_tensor_file(out / "psf_db.ut", io::from_image(db.data));
  io::write_pgm(out / "psf_db.pgm", db.data, cfg.dynamic_range);
  const double ratio = sidelobe_energy_ratio(psf);
  ctx.write_run_report("psf", &cfg, {}, {{"grid", grid}, {"sidelobe_ratio", ratio}});
  ctx.out() << "psf: " << grid.nz << "x" << grid.nx << ", sidelobe ratio " << ratio << " -> "
            << (out / "psf.ut").generic_string() << '\n';
  return kOk;
}

int cmd_dataset(const Context& ctx, const GridOptions& go, std::uint64_t n, unsigned workers) {
  const SimConfig cfg = ctx.config();
  const Grid grid = go.grid(cfg);
  const fs::path out = ctx.out_dir();
  const Manifest m = make_dataset(cfg, grid, n, ctx.seed(), workers, out);
  ctx.write_run_report("dataset", &cfg, {}, {{"n_pairs", n}, {"grid", grid}});
  ctx.out() << "dataset: " << m.pairs.size() << " pairs -> " << (out / "manifest.json").generic_string() << '\n';
  return kOk;
}

struct TrainOptions {
  std::string dataset;
  std::string loss = "l1_bmode";
  std::string domain = "rf";
  int epochs = 30;
  std::size_t val = 20;
  double lr = 1e-3;
  int levels = 3;
  int base = 16;
};

int cmd_train(const Context& ctx, const TrainOptions& o) {
  const fs::path dir(o.dataset);
  const SplitDataset data = load_split(dir, o.val);
  nn::ModelConfig mc;
  mc.levels = o.levels;
  mc.base_channels = o.base;
  mc.domain = nn::parse_domain(o.domain);
  nn::TrainConfig tc;
  tc.lr0 = o.lr;
  tc.epochs = o.epochs;
  tc.seed = ctx.seed();
  tc.loss = nn::parse_loss_kind(o.loss);
  const fs::path out = ctx.out_dir();
  tc.checkpoint_dir = out / "checkpoints";

  nn::UNet<float> model(mc, derive_seed(ctx.seed(), 0x4d4f'4445'4cULL));
  std::size_t steps_per_epoch = data.train_psfs.size();
  const nn::TrainLog log = nn::train(model, data.train_psfs, data.cfg, tc, [&](const nn::StepInfo& s) {
    if ((s.step + 1) % static_cast<std::int64_t>(steps_per_epoch) == 0)
      ctx.err() << "epoch " << s.epoch << " lr " << s.lr << " last loss " << s.loss << '\n';
  });
  nn::save_checkpoint(out, "weights", model,
                      {{"loss", to_string(tc.loss)}, {"epochs", tc.epochs}, {"seed", tc.seed}, {"lr0", tc.lr0}});
  io::write_text(out / "loss.json", json{{"loss_kind", to_string(tc.loss)}, {"losses", log.losses}, {"epoch_lr", log.epoch_lr}}.dump() + "\n");

  fs::create_directories(out / "val" / "pred");
  fs::create_directories(out / "val" / "target");
  std::vector<MetricsReport> reports;
  json per_pair = json::array();
  for (std::size_t i = 0; i < data.val_psfs.size(); ++i) {
    const RealPatch pred = nn::predict_psf(model, data.val_speckle[i]);
    const std::string name = pair_name(data.val_index[i]) + ".ut";
    io::write_tensor_file(out / "val" / "pred" / name, io::from_image(pred.data));
    io::write_tensor_file(out / "val" / "target" / name, io::from_image(data.val_psfs[i].data));
    reports.push_back(evaluate_psf(pred, data.val_psfs[i], data.cfg.dynamic_range));
    json r = reports.back().to_json();
    r["pair"] = data.val_index[i];
    per_pair.push_back(r);
  }
  const MetricsReport mean = mean_report(reports);
  io::write_text(out / "metrics.json", json{{"pairs", per_pair}, {"mean", mean.to_json()}}.dump(2) + "\n");
  ctx.write_run_report("train", &data.cfg, {dir / "manifest.json"},
                       {{"loss", o.loss}, {"domain", o.domain}, {"epochs", o.epochs}, {"val", o.val},
                        {"model", nn::to_json(mc)}});
  ctx.out() << "train: " << log.losses.size() << " steps, val ssim " << mean.ssim << " lbpd " << mean.lbpd
            << " iou " << mean.iou_mean << '\n';
  return kOk;
}

int cmd_eval(const Context& ctx, const std::string& pred, const std::string& target, double dr) {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::is_directory(pred) != fs::is_directory(target))
    throw InvalidArgument("eval: --pred and --target must both be files or both be directories");
  if (fs::is_directory(pred)) {
    for (const auto& p : tensor_files(pred)) {
      const fs::path t = fs::path(target) / p.filename();
      if (!fs::exists(t)) throw IoError(t.string(), "no target for prediction " + p.filename().string());
      pairs.emplace_back(p, t);
    }
  } else {
    pairs.emplace_back(pred, target);
  }
  std::vector<MetricsReport> reports;
  json per_pair = json::array();
  std::vector<fs::path> inputs;
  for (const auto& [p, t] : pairs) {
    const ImageR a = read_rf(p), b = read_rf(t);
    reports.push_back(evaluate_psf(RealPatch(unit_grid(a), RealKind::RF, a), RealPatch(unit_grid(b), RealKind::RF, b), dr));
    json r = reports.back().to_json();
    r["pred"] = p.generic_string();
    r["target"] = t.generic_string();
    per_pair.push_back(r);
    inputs.push_back(p);
    inputs.push_back(t);
  }
  const MetricsReport mean = mean_report(reports);
  const json report = {{"pairs", per_pair}, {"mean", mean.to_json()}};
  io::write_text(ctx.out_dir() / "metrics.json", report.dump(2) + "\n");
  ctx.write_run_report("eval", nullptr, inputs);
  ctx.out() << mean.to_json().dump() << '\n';
  return kOk;
}

int cmd_render(const Context& ctx, const std::string& input, const std::string& kind, double dr) {
  const ImageR img = read_rf(input);
  const ImageR db = kind == "db" ? img : bmode(img, dr);
  const fs::path out = ctx.out_dir() / (fs::path(input).stem().string() + ".pgm");
  io::write_pgm(out, db, dr);
  ctx.out() << "render: " << out.generic_string() << '\n';
  return kOk;
}

int cmd_oracle_check(const Context& ctx, const GridOptions& go, double eps) {
  const SimConfig cfg = ctx.config();
  const Grid grid = go.grid(cfg);
  const OracleReport rep = run_oracle_check(cfg, grid, ctx.seed(), eps);
  json cases = json::array();
  for (const auto& c : rep.cases) {
    ctx.out() << (c.pass ? "PASS" : "FAIL") << "  phase " << std::fixed << std::setprecision(4) << c.aberration_level
              << " rad  ssim " << c.ssim << "  iou " << c.iou_mean << '\n';
    cases.push_back({{"aberration_level", c.aberration_level}, {"ssim", c.ssim}, {"iou_mean", c.iou_mean},
                     {"pass", c.pass}, {"profile_seed", c.profile_seed}, {"scatterer_seed", c.scatterer_seed}});
  }
  ctx.out() << (rep.pass ? "oracle-check: PASS" : "oracle-check: FAIL") << '\n';
  io::write_text(ctx.out_dir() / "oracle.json",
                 json{{"eps", eps}, {"pass", rep.pass}, {"min_ssim", rep.min_ssim}, {"min_iou", rep.min_iou},
                      {"cases", cases}}
                         .dump(2) +
                     "\n");
  ctx.write_run_report("oracle-check", &cfg, {}, {{"grid", grid}});
  return rep.pass ? kOk : kValidationError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ultrasound PSF simulation, datasets and PSF-estimation networks", "psflab"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Configuration file (key = value)")->envname("PSFLAB_CONFIG");
  app.add_option("--out", g.out_dir, "Output directory")->envname("PSFLAB_OUT");
  app.add_option("--seed", g.seed, "Seed for every random stream")->envname("PSFLAB_SEED");
  app.add_option("--set", g.sets, "Override a config field, KEY=VALUE (repeatable)");

  std::optional<std::string> phase;
  auto* screen = app.add_subcommand("screen", "Generate a phase screen");
  screen->add_option("--max-phase-error", phase, "Peak phase error, e.g. '0.5 pi'");

  GridOptions psf_grid, ds_grid, oracle_grid;
  auto* psf = app.add_subcommand("psf", "Simulate a PSF and its B-mode image");
  psf->add_option("--max-phase-error", phase, "Peak phase error, e.g. '0.5 pi'");
  psf_grid.add_to(psf);

  std::uint64_t n_pairs = 0;
  unsigned workers = 1;
  auto* dataset = app.add_subcommand("dataset", "Generate training pairs");
  dataset->add_option("--n", n_pairs, "Number of pairs")->required();
  dataset->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  ds_grid.add_to(dataset);

  TrainOptions to;
  auto* train = app.add_subcommand("train", "Train a U-Net or complex U-Net");
  train->add_option("--dataset", to.dataset, "Dataset directory")->required();
  train->add_option("--loss", to.loss, "l1, l2, ssim, feature or their _bmode variants");
  train->add_option("--domain", to.domain, "rf or kspace")->check(CLI::IsMember({"rf", "kspace"}));
  train->add_option("--epochs", to.epochs, "Epochs")->check(CLI::NonNegativeNumber);
  train->add_option("--val", to.val, "Held-out pairs (taken from the end)");
  train->add_option("--lr", to.lr, "Initial learning rate")->check(CLI::PositiveNumber);
  train->add_option("--levels", to.levels, "U-Net depth")->check(CLI::PositiveNumber);
  train->add_option("--base", to.base, "Channels at full resolution")->check(CLI::PositiveNumber);

  std::string pred, target;
  double dr = 60.0;
  auto* eval = app.add_subcommand("eval", "Score predicted RF PSFs against targets");
  eval->add_option("--pred", pred, "Prediction file or directory")->required();
  eval->add_option("--target", target, "Target file or directory")->required();
  eval->add_option("--dr", dr, "Dynamic range in dB")->check(CLI::PositiveNumber);

  std::string render_in, render_kind = "rf";
  auto* render = app.add_subcommand("render", "Write a tensor as an 8-bit PGM");
  render->add_option("--in", render_in, "Input tensor file")->required();
  render->add_option("--kind", render_kind, "rf (log-compressed first) or db")->check(CLI::IsMember({"rf", "db"}));
  render->add_option("--dr", dr, "Dynamic range in dB")->check(CLI::PositiveNumber);

  double eps = 1e-6;
  auto* oracle = app.add_subcommand("oracle-check", "Recover PSFs with known scatterers and score them");
  oracle->add_option("--eps", eps, "Wiener regularization")->check(CLI::PositiveNumber);
  oracle_grid.add_to(oracle);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidationError;
  }

  const Context ctx(g, out, err);
  try {
    if (*screen) return cmd_screen(ctx, phase);
    if (*psf) return cmd_psf(ctx, psf_grid, phase);
    if (*dataset) return cmd_dataset(ctx, ds_grid, n_pairs, workers);
    if (*train) return cmd_train(ctx, to);
    if (*eval) return cmd_eval(ctx, pred, target, dr);
    if (*render) return cmd_render(ctx, render_in, render_kind, dr);
    if (*oracle) return cmd_oracle_check(ctx, oracle_grid, eps);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace psflab::cli
