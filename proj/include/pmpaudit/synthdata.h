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

#ifndef PMPAUDIT_SYNTHDATA_H_
#define PMPAUDIT_SYNTHDATA_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "pmpaudit/expmech.h"
#include "pmpaudit/rng.h"
#include "pmpaudit/types.h"

// Deterministic synthetic-data generation for the experiment suites:
// unit-norm candidate sets, Gaussian parent sets centered at a candidate or
// at the origin, outlier injection, and l2 clipping. Everything is driven by
// the splitmix64 stream so identical GenSpecs produce bit-identical data.

namespace pmpaudit {

enum class CenterKind { kCandidateOne, kOrigin };

struct GenSpec {
  int n = 1;
  int d = 1;
  int m = 0;  // candidate count; 0 when the experiment has no candidate set
  double sigma_data = 1.0;
  double clip = 1.0;
  int outlier_count = 0;
  double outlier_factor = 1.0;
  CenterKind center = CenterKind::kOrigin;
  std::uint64_t seed = 0;
};

void ValidateGenSpec(const GenSpec& spec);

// m candidates, coordinate-wise standard normal then scaled to unit norm
// (a zero draw is resampled). Requires spec.m >= 2.
CandidateSet GenCandidates(const GenSpec& spec, SplitMix64& rng);

// 2n points from N(center, sigma_data^2 I), in order: sample, scale the
// outliers, clip to the radius-spec.clip ball, then resolve any exact
// duplicates by adding 1e-12 * (point index) to the first coordinate (the
// perturbation is far below every tolerance used downstream).
ParentSet GenParent(const GenSpec& spec, const CandidateSet* cands,
                    SplitMix64& rng);

// Scales k stream-chosen distinct rows by `factor` in place.
void InjectOutliers(std::vector<double>& points, int rows, int d, int k,
                    double factor, SplitMix64& rng);

// Projects every row with ||x|| > clip back to the sphere of radius clip.
void ClipRows(std::vector<double>& points, int rows, int d, double clip);

// Candidates (when spec.m > 0) and parent drawn from one stream seeded by
// spec.seed, candidates first.
struct Instance {
  std::optional<CandidateSet> candidates;
  ParentSet parent;
};
Instance MakeInstance(const GenSpec& spec);

// Same, with the per-trial stream derived from (spec.seed, trial_index).
Instance MakeTrialInstance(const GenSpec& spec, std::uint64_t trial_index);

}  // namespace pmpaudit

#endif  // PMPAUDIT_SYNTHDATA_H_
