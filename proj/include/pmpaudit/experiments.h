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

#ifndef PMPAUDIT_EXPERIMENTS_H_
#define PMPAUDIT_EXPERIMENTS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "pmpaudit/synthdata.h"
#include "pmpaudit/types.h"

// Config-driven experiment runner: for each (sweep value, trial) it generates
// data, calibrates the mechanism to the configured target, computes the
// membership-privacy parameter eps~(X), the subpopulation DP parameter
// eps(X), and the worst-case parameter eps, and emits one CSV row, followed
// by per-sweep-value mean rows (trial = -1). Deterministic given the seed;
// trials run concurrently on independent derived streams and rows are
// emitted in canonical (sweep_value, trial) order.

namespace pmpaudit {

enum class ExperimentKind {
  kExpMechSigmaSweep,  // sweep = data sigma; eps(X) target fixed
  kExpMechClipSweep,   // sweep = clip threshold C
  kExpMechDimSweep,    // sweep = data dimension d
  kGaussEpsSweep,      // sweep = DP epsilon target used to calibrate sigma
  kGaussClipSweep,     // sweep = clip threshold C
  kGaussDimSweep,      // sweep = data dimension d
};

ExperimentKind ParseExperimentKind(const std::string& name);
std::string ExperimentKindName(ExperimentKind kind);
bool IsExpMechKind(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kExpMechSigmaSweep;
  std::vector<double> sweep_values;  // nonempty, strictly increasing
  int trials = 20;
  GenSpec gen;
  double target_eps_x = 0.0;  // exponential mechanism: eps(X) to calibrate to
  double target_eps = 0.0;    // Gaussian sweeps over C or d: fixed DP target
  double delta = 0.0;         // Gaussian mechanisms only
  std::string output_path;
};

// Parses and validates a JSON experiment config (see configs/ for examples).
// Throws std::invalid_argument on malformed or inconsistent input.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

struct SweepRow {
  double sweep_value = 0.0;
  int trial = 0;  // -1 marks a per-sweep-value mean row
  double eps_tilde = 0.0;
  double eps_x = 0.0;
  double eps_worst = 0.0;
  double ratio = 0.0;    // eps_tilde / eps_worst
  double ratio_x = 0.0;  // eps_tilde / eps_x
  bool failed = false;   // calibration failure; numeric fields are NaN
  std::string error;
};

struct RunResult {
  std::vector<SweepRow> trial_rows;  // (sweep asc, trial asc)
  std::vector<SweepRow> mean_rows;   // one per sweep value, trial = -1
  int total_cells = 0;
  int failed_cells = 0;
};

// Runs one (sweep value, trial) cell; exposed for tests.
SweepRow ComputeCell(const ExperimentConfig& config, double sweep_value,
                     int trial);

RunResult RunExperiment(const ExperimentConfig& config);

// CSV with header sweep_value,trial,eps_tilde,eps_X,eps_worst,ratio,ratio_X;
// floats at 12 significant digits, LF line endings. Unless `deterministic`,
// a timestamp comment line precedes the header.
void WriteCsv(const RunResult& result, const ExperimentConfig& config,
              std::ostream& out, bool deterministic);
void WriteCsvFile(const RunResult& result, const ExperimentConfig& config,
                  const std::string& path, bool deterministic);

// Mean row lookup by sweep value; throws std::out_of_range when missing.
const SweepRow& MeanRowAt(const RunResult& result, double sweep_value);

// Worker cap: PMP_AUDIT_THREADS when set, hardware concurrency otherwise.
int ThreadCap();

}  // namespace pmpaudit

#endif  // PMPAUDIT_EXPERIMENTS_H_
