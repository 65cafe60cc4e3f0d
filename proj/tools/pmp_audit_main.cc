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

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pmpaudit/core.h"
#include "pmpaudit/experiments.h"
#include "pmpaudit/verify.h"

namespace {

// Exit codes: 0 success, 1 property failure, 2 usage error, 3 calibration
// failures above the 10% threshold.
constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCalibration = 3;

int RunCommand(const std::string& config_path, const std::string& out_override,
               bool deterministic) {
  pmpaudit::ExperimentConfig config =
      pmpaudit::LoadExperimentConfig(config_path);
  if (!out_override.empty()) config.output_path = out_override;
  if (config.output_path.empty()) {
    std::fprintf(stderr, "error: no output path (set output_path or --out)\n");
    return kExitUsage;
  }

  const pmpaudit::RunResult result = pmpaudit::RunExperiment(config);
  pmpaudit::WriteCsvFile(result, config, config.output_path, deterministic);

  std::printf("experiment=%s cells=%d failed=%d output=%s\n",
              pmpaudit::ExperimentKindName(config.kind).c_str(),
              result.total_cells, result.failed_cells,
              config.output_path.c_str());
  if (result.failed_cells * 10 > result.total_cells) {
    std::fprintf(stderr, "error: more than 10%% of cells failed calibration\n");
    return kExitCalibration;
  }
  return kExitOk;
}

int VerifyCommand(const std::string& suite) {
  const auto results = pmpaudit::RunSuite(suite);
  int failures = 0;
  for (const auto& r : results) {
    if (r.pass) {
      std::printf("PASS %s%s%s\n", r.name.c_str(),
                  r.detail.empty() ? "" : " — ", r.detail.c_str());
    } else {
      ++failures;
      std::printf("FAIL %s — %s\n", r.name.c_str(), r.detail.c_str());
    }
  }
  std::printf("pmp-audit verify: suite=%s checks=%zu failures=%d\n",
              suite.c_str(), results.size(), failures);
  return failures == 0 ? kExitOk : kExitPropertyFailure;
}

int MiaBoundCommand(double eps) {
  std::printf("eps: %.12g\n", eps);
  std::printf("mia_success_ceiling: %.12g\n", pmpaudit::MiaSuccessBound(eps));
  std::printf("mip_eta: %.12g\n", pmpaudit::PmpToMipEta(eps));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pmp-audit: membership-privacy and DP parameter auditing for the "
      "exponential and Gaussian mechanisms"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  bool deterministic = false;
  CLI::App* run = app.add_subcommand(
      "run", "run a sweep experiment from a JSON config and write CSV");
  run->add_option("config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_flag("--deterministic", deterministic,
                "suppress the timestamp header line so reruns byte-match");
  run->add_option("--out", out_override, "override the configured output path");

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "core | expmech | gauss | attacks | all")
      ->required()
      ->check(CLI::IsMember({"core", "expmech", "gauss", "attacks", "all"}));

  double eps = 0.0;
  CLI::App* mia = app.add_subcommand(
      "mia-bound", "print the attack-success ceiling for a privacy level");
  mia->add_option("eps", eps, "privacy parameter (>= 0)")
      ->required()
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return RunCommand(config_path, out_override, deterministic);
    if (verify->parsed()) return VerifyCommand(suite);
    if (mia->parsed()) return MiaBoundCommand(eps);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPropertyFailure;
  }
  return kExitUsage;
}
