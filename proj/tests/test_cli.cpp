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

#include <sstream>

#include <json.hpp>

#include "psflab/cli.hpp"
#include "psflab/io/hash.hpp"
#include "psflab/io/tensor_file.hpp"
#include "support/testing.hpp"

using namespace psflab;
using namespace psflab::testing;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "psflab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(io::read_bytes(p)); }

}  // namespace

TEST_CASE("cli: help and usage errors") {
  const Result help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("oracle-check") != std::string::npos);
  CHECK(run({}).code == cli::kValidationError);
  CHECK(run({"bogus"}).code == cli::kValidationError);
  CHECK(run({"psf", "--spacing", "tiny"}).code == cli::kValidationError);
  CHECK(run({"train", "--dataset", "x", "--domain", "image"}).code == cli::kValidationError);
}

TEST_CASE("cli: configuration errors and overrides") {
  TempDir tmp("cli_cfg");
  const auto bad = run({"--out", tmp.path().string(), "--set", "fc=-1", "screen"});
  CHECK(bad.code == cli::kValidationError);
  CHECK(bad.err.find("fc: must be > 0") != std::string::npos);
  CHECK(run({"--out", tmp.path().string(), "--set", "nonsense", "screen"}).code == cli::kValidationError);
  CHECK(run({"--config", (tmp.path() / "missing.cfg").string(), "screen"}).code == cli::kIoError);

  io::write_text(tmp.path() / "probe.cfg", "fc = 4 MHz\nn_elements = 96\n");
  const auto ok = run({"--config", (tmp.path() / "probe.cfg").string(), "--out", tmp.path().string(), "--seed", "5",
                       "screen", "--max-phase-error", "0.25 pi"});
  REQUIRE(ok.code == cli::kOk);
  const json screen = read_json(tmp.path() / "screen.json");
  CHECK(screen["delays_s"].size() == 96);
  CHECK(screen["max_phase_error"].get<double>() == doctest::Approx(kPi / 4));
  const json report = read_json(tmp.path() / "run.json");
  CHECK(report["seed"] == 5);
  CHECK(report["config"]["fc"].get<double>() == doctest::Approx(4e6));
  CHECK(report["config_hash"].get<std::string>().size() == 40);

  const auto warn = run({"--out", tmp.path().string(), "--set", "fc=9MHz", "screen"});
  CHECK(warn.code == cli::kOk);
  CHECK(warn.err.find("warning") != std::string::npos);
}

TEST_CASE("cli: psf, render and eval") {
  TempDir tmp("cli_psf");
  const std::string out = tmp.path().string();
  REQUIRE(run({"--out", out, "psf", "--nx", "32", "--nz", "32", "--max-phase-error", "0.5pi"}).code == cli::kOk);
  const io::TensorData t = io::read_tensor_file(tmp.path() / "psf.ut");
  CHECK(t.dims == std::vector<std::uint32_t>{32, 32});
  CHECK(fs::exists(tmp.path() / "psf_db.pgm"));

  REQUIRE(run({"--out", out, "render", "--in", (tmp.path() / "psf.ut").string()}).code == cli::kOk);
  CHECK(fs::exists(tmp.path() / "psf.pgm"));

  const Result ev = run({"--out", out, "eval", "--pred", (tmp.path() / "psf.ut").string(), "--target",
                         (tmp.path() / "psf.ut").string()});
  REQUIRE(ev.code == cli::kOk);
  const json m = read_json(tmp.path() / "metrics.json");
  CHECK(m["mean"]["ssim"].get<double>() == 1.0);
  CHECK(m["mean"]["lbpd"].get<double>() == 0.0);
  const json report = read_json(tmp.path() / "run.json");
  CHECK(report["inputs"][0]["git_blob"] == io::git_blob_hash(tmp.path() / "psf.ut"));

  CHECK(run({"--out", out, "eval", "--pred", (tmp.path() / "nope.ut").string(), "--target",
             (tmp.path() / "psf.ut").string()})
            .code == cli::kIoError);
  io::write_text(tmp.path() / "junk.ut", "not a tensor file at all");
  CHECK(run({"--out", out, "render", "--in", (tmp.path() / "junk.ut").string()}).code == cli::kIoError);
}

TEST_CASE("cli: dataset, train and directory eval") {
  TempDir tmp("cli_train");
  const fs::path ds = tmp.path() / "ds", run_dir = tmp.path() / "run";
  REQUIRE(run({"--out", ds.string(), "--seed", "2", "dataset", "--n", "5", "--nx", "16", "--nz", "16", "--workers",
               "2"})
              .code == cli::kOk);
  CHECK(read_json(ds / "manifest.json")["pairs"].size() == 5);

  const Result tr = run({"--out", run_dir.string(), "--seed", "3", "train", "--dataset", ds.string(), "--epochs", "2",
                         "--val", "2", "--levels", "2", "--base", "4", "--domain", "kspace", "--loss", "ssim_bmode"});
  REQUIRE(tr.code == cli::kOk);
  for (const char* f : {"weights.ut", "weights.json", "loss.json", "metrics.json", "run.json",
                        "checkpoints/epoch_000.json", "checkpoints/epoch_001.ut"})
    CHECK(fs::exists(run_dir / f));
  CHECK(read_json(run_dir / "loss.json")["losses"].size() == 6);
  CHECK(read_json(run_dir / "metrics.json")["pairs"].size() == 2);

  const fs::path ev = tmp.path() / "ev";
  REQUIRE(run({"--out", ev.string(), "eval", "--pred", (run_dir / "val" / "pred").string(), "--target",
               (run_dir / "val" / "target").string()})
              .code == cli::kOk);
  // Saved predictions are float32, so scores agree to rounding.
  const json saved = read_json(ev / "metrics.json")["mean"], live = read_json(run_dir / "metrics.json")["mean"];
  for (const char* k : {"ssim", "lbpd", "iou_mean"})
    CHECK(saved[k].get<double>() == doctest::Approx(live[k].get<double>()).epsilon(1e-6));

  // Training on an incomplete dataset is refused.
  json m = read_json(ds / "manifest.json");
  m["complete"] = false;
  io::write_text(ds / "manifest.json", m.dump());
  CHECK(run({"--out", run_dir.string(), "train", "--dataset", ds.string(), "--val", "2"}).code == cli::kIoError);
}

TEST_CASE("cli: oracle check") {
  TempDir tmp("cli_oracle");
  const Result r = run({"--out", tmp.path().string(), "oracle-check"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("oracle-check: PASS") != std::string::npos);
  CHECK(read_json(tmp.path() / "oracle.json")["cases"].size() == 4);
}
