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

#ifndef PMPAUDIT_VERIFY_H_
#define PMPAUDIT_VERIFY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pmpaudit/core.h"
#include "pmpaudit/types.h"

// Property suites behind `pmp-audit verify`: brute-force verification of the
// equivalent membership-privacy formulations, the ordering chains,
// post-processing, calibration residuals, and the certified-bound soundness
// checks. The acceptance tests reuse the same checks.

namespace pmpaudit {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Suites: "core", "expmech", "gauss", "attacks", or "all".
std::vector<CheckResult> RunSuite(const std::string& suite);
bool AllPassed(const std::vector<CheckResult>& results);

namespace checks {
CheckResult PartitionCounts();
CheckResult NeighborCounts();
CheckResult FormulationEquivalence();
CheckResult TwoPointCollapse();
CheckResult MixtureOrdering();
CheckResult PostProcessing();
CheckResult HockeyStickBasics();

CheckResult ExpMechOrderingChain();
CheckResult ExpMechOracleAgreement();
CheckResult ExpMechScaleInvariance();
CheckResult ExpMechSigmaRatioTrend();

CheckResult GaussBoundSoundness();
CheckResult GaussFastEqualsGeneral();
CheckResult GaussOrderingChain();
CheckResult GaussCalibrationResiduals();
CheckResult GaussScaleInvariance();

CheckResult AttacksMod6Separation();
CheckResult AttacksSuccessCeiling();
CheckResult AttacksWorstCaseDominance();
CheckResult AttacksBayesRuleOptimality();
}  // namespace checks

// Test utilities shared by the suites and the test binaries. -----------------

// Mechanism with strictly positive random masses, a deterministic function of
// (seed, subset); `alphabet` outcomes.
FiniteMechanism RandomMechanism(int alphabet, std::uint64_t seed);

// Parent of 2n distinct 1-d points 0, 1, ..., 2n-1 (placeholder geometry for
// mechanisms that only read the subset selector).
ParentSet MakeIndexParent(int n);

// Independent evaluations of the pure membership-privacy parameter by full
// enumeration of outcome events (2^alphabet of them): once from the
// conditional output probabilities and once through the Bayes posterior with
// uniform membership prior. Both must match the singleton-based computation
// for finite mechanisms.
double PmpEpsilonFromConditionalEvents(const MechanismTable& table,
                                       const ParentSet& parent);
double PmpEpsilonFromPosteriorEvents(const MechanismTable& table,
                                     const ParentSet& parent);

// Spearman rank correlation; x and y must have equal size >= 2. Ties receive
// average ranks.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

}  // namespace pmpaudit

#endif  // PMPAUDIT_VERIFY_H_
