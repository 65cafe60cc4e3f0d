// Copyright 2026 The pmp-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmpaudit/experiments.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include <sys/wait.h>

namespace {

using namespace pmpaudit;

const char* kTinyConfig = R"json({
  "experiment": "expmech-sigma-sweep",
  "sweep_values": [0.5, 1.0],
  "trials": 2,
  "gen": {"n": 2, "d": 1, "m": 3, "clip": 4.0, "center": "candidate_1", "seed": 99},
  "target_eps_x": 1.0,
  "output_path": "tiny.csv"
})json";

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult RunCli(const std::string& args) {
  const std::string cmd =
      std::string(PMPAUDIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.out += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig config = ParseExperimentConfig(kTinyConfig);
  CHECK(config.kind == ExperimentKind::kExpMechSigmaSweep);
  CHECK(config.sweep_values.size() == 2);
  CHECK(config.trials == 2);
  CHECK(config.gen.n == 2);
  CHECK(config.target_eps_x == 1.0);
  CHECK(config.output_path == "tiny.csv");

  std::string bad = kTinyConfig;
  bad.replace(bad.find("[0.5, 1.0]"), 10, "[1.0, 0.5]");
  CHECK_THROWS_AS(ParseExperimentConfig(bad), std::invalid_argument);

  std::string no_target = kTinyConfig;
  no_target.replace(no_target.find("\"target_eps_x\": 1.0,\n"), 21, "");
  CHECK_THROWS_AS(ParseExperimentConfig(no_target), std::invalid_argument);

  CHECK_THROWS_AS(ParseExperimentConfig(R"({"experiment": "bogus"})"),
                  std::invalid_argument);

  // Dimension sweeps require integral sweep values.
  CHECK_THROWS_AS(ParseExperimentConfig(R"json({
    "experiment": "gauss-dim-sweep", "sweep_values": [1.5, 2.0],
    "trials": 1, "gen": {"n": 4, "clip": 1.0, "seed": 1}, "delta": 0.01,
    "target_eps": 1.0})json"),
                  std::invalid_argument);
}

TEST_CASE("cell computation and row invariants") {
  const ExperimentConfig config = ParseExperimentConfig(kTinyConfig);
  const SweepRow row = ComputeCell(config, 1.0, 0);
  CHECK(!row.failed);
  CHECK(row.eps_tilde > 0.0);
  CHECK(row.ratio <= row.ratio_x);
  CHECK(row.ratio_x <= 1.0 + 1e-9);
  CHECK(row.eps_x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("runs are deterministic and means aggregate trials") {
  const ExperimentConfig config = ParseExperimentConfig(kTinyConfig);
  const RunResult r1 = RunExperiment(config);
  const RunResult r2 = RunExperiment(config);
  REQUIRE(r1.trial_rows.size() == 4);
  REQUIRE(r1.mean_rows.size() == 2);
  for (std::size_t i = 0; i < r1.trial_rows.size(); ++i) {
    CHECK(r1.trial_rows[i].eps_tilde == r2.trial_rows[i].eps_tilde);
    CHECK(r1.trial_rows[i].eps_worst == r2.trial_rows[i].eps_worst);
  }

  const SweepRow& mean = MeanRowAt(r1, 1.0);
  CHECK(mean.trial == -1);
  const double expect =
      0.5 * (r1.trial_rows[2].eps_tilde + r1.trial_rows[3].eps_tilde);
  CHECK(mean.eps_tilde == doctest::Approx(expect).epsilon(1e-15));

  std::ostringstream csv1, csv2;
  WriteCsv(r1, config, csv1, /*deterministic=*/true);
  WriteCsv(r2, config, csv2, /*deterministic=*/true);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().rfind("sweep_value,trial,eps_tilde,eps_X,eps_worst,ratio,ratio_X\n",
                         0) == 0);
  // LF endings only.
  CHECK(csv1.str().find('\r') == std::string::npos);
}

TEST_CASE("calibration failures mark rows and keep the run alive") {
  // sigma_data ~ 0 collapses the parent to near-identical points, so eps(X)
  // stays around scale * 1e-15 and the absurd target is unreachable before
  // the bracket cap at 2^60.
  const char* cfg_text = R"json({
    "experiment": "expmech-clip-sweep",
    "sweep_values": [2.0],
    "trials": 1,
    "gen": {"n": 1, "d": 2, "m": 2, "sigma_data": 1e-15, "clip": 2.0,
            "center": "origin", "seed": 6},
    "target_eps_x": 1e9,
    "output_path": "fail.csv"
  })json";
  const ExperimentConfig config = ParseExperimentConfig(cfg_text);
  const RunResult result = RunExperiment(config);
  CHECK(result.failed_cells == 1);
  CHECK(result.trial_rows[0].failed);
  CHECK(std::isnan(result.trial_rows[0].eps_tilde));
  CHECK(result.mean_rows[0].failed);

  std::ostringstream csv;
  WriteCsv(result, config, csv, true);
  CHECK(csv.str().find("nan") != std::string::npos);
}

TEST_CASE("cli: run is byte-deterministic") {
  const auto cfg_path = TempPath("pmp_tiny_config.json");
  const auto out1 = TempPath("pmp_tiny_1.csv");
  const auto out2 = TempPath("pmp_tiny_2.csv");
  {
    std::ofstream out(cfg_path);
    out << kTinyConfig;
  }
  const CliResult r1 = RunCli("run " + cfg_path.string() +
                              " --deterministic --out " + out1.string());
  const CliResult r2 = RunCli("run " + cfg_path.string() +
                              " --deterministic --out " + out2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const std::string csv1 = ReadFile(out1);
  CHECK(!csv1.empty());
  CHECK(csv1 == ReadFile(out2));
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

TEST_CASE("cli: calibration-failure threshold sets exit code 3") {
  const auto cfg_path = TempPath("pmp_fail_config.json");
  const auto out_path = TempPath("pmp_fail.csv");
  {
    std::ofstream out(cfg_path);
    out << R"json({
      "experiment": "expmech-clip-sweep",
      "sweep_values": [2.0],
      "trials": 1,
      "gen": {"n": 1, "d": 2, "m": 2, "sigma_data": 1e-15, "clip": 2.0,
              "center": "origin", "seed": 6},
      "target_eps_x": 1e9,
      "output_path": ")json"
        << out_path.string() << "\"}";
  }
  const CliResult r = RunCli("run " + cfg_path.string() + " --deterministic");
  CHECK(r.exit_code == 3);
  CHECK(ReadFile(out_path).find("nan") != std::string::npos);
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out_path);
}

TEST_CASE("cli: mia-bound output and usage errors") {
  const CliResult ok = RunCli("mia-bound 0.1");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("0.52497") != std::string::npos);
  CHECK(ok.out.find("mip_eta") != std::string::npos);

  CHECK(RunCli("mia-bound -- -1").exit_code == 2);
  CHECK(RunCli("bogus-subcommand").exit_code == 2);
  CHECK(RunCli("verify bogus-suite").exit_code == 2);
  CHECK(RunCli("run /nonexistent/config.json").exit_code == 2);
}

TEST_CASE("cli: verify suite runs clean") {
  const CliResult r = RunCli("verify attacks");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS attacks/mod6-separation") != std::string::npos);
  CHECK(r.out.find("failures=0") != std::string::npos);
}

TEST_CASE("shipped figure configs parse") {
  for (const char* name :
       {"fig1_sigma_sweep.json", "fig2_clip_sweep.json", "fig3_dim_sweep.json",
        "fig4_epsx_sweep.json", "fig5_clip_sweep.json", "fig6_dim_sweep.json"}) {
    const std::string path = std::string(PMPAUDIT_CONFIG_DIR) + "/" + name;
    CHECK_NOTHROW(LoadExperimentConfig(path));
  }
}

}  // namespace
