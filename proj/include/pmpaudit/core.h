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

#ifndef PMPAUDIT_CORE_H_
#define PMPAUDIT_CORE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pmpaudit/subsets.h"
#include "pmpaudit/types.h"

// Exact brute-force membership-privacy and DP parameters for mechanisms with
// a finite output alphabet, by enumeration of all half-subsets of the parent
// set. Practical for n <= 8.

namespace pmpaudit {

// All candidate datasets of a parent together with their output PMFs; the
// cache shared by the brute-force analyses below.
struct MechanismTable {
  std::vector<SubsetSelector> subsets;  // ascending mask order
  std::vector<DiscretePMF> pmfs;        // aligned with `subsets`
  std::vector<int> rank;                // mask -> index into `subsets`
  int alphabet_size = 0;
};

MechanismTable BuildMechanismTable(const FiniteMechanism& mech,
                                   const ParentSet& parent);

// Hockey-stick divergence D_{e^eps}(P || Q) = sum_a max(0, p(a) - e^eps q(a)).
// Requires a shared alphabet and eps >= 0; the value lies in [0, 1].
double HockeyStickDivergence(const DiscretePMF& p, const DiscretePMF& q,
                             double eps);

// Uniform averages of the per-dataset laws over the half-subsets containing /
// excluding `target`; both renormalized to counter accumulated rounding.
MixturePair BuildMixtures(const FiniteMechanism& mech, const ParentSet& parent,
                          int target);
MixturePair BuildMixtures(const MechanismTable& table, const ParentSet& parent,
                          int target);

// Smallest eps such that for every target x and every outcome a,
// |ln(p_in(a)/p_out(a))| <= eps, where p_in/p_out are the membership
// mixtures. Returns kInfiniteEps if the mixtures have different supports for
// some target. The supremum over outcome events reduces to a maximum over
// singletons: a weighted average of atom ratios never exceeds the largest
// atom ratio.
PrivacyParams PmpExactPure(const FiniteMechanism& mech,
                           const ParentSet& parent);
PrivacyParams PmpExactPure(const MechanismTable& table,
                           const ParentSet& parent);

// Smallest delta at privacy level eps: the largest hockey-stick divergence
// (both orders) between the membership mixtures over all targets.
double PmpDeltaAtEps(const FiniteMechanism& mech, const ParentSet& parent,
                     double eps);
double PmpDeltaAtEps(const MechanismTable& table, const ParentSet& parent,
                     double eps);

// Smallest eps bounding |ln(p_D(a)/p_D'(a))| over all adjacent dataset pairs
// D, D' inside the parent set and all outcomes a; kInfiniteEps when supports
// differ on some adjacent pair.
PrivacyParams SubpopDpExactPure(const FiniteMechanism& mech,
                                const ParentSet& parent);
PrivacyParams SubpopDpExactPure(const MechanismTable& table,
                                const ParentSet& parent);

// Ceiling 1/(1 + e^-eps) on the success probability of any membership
// inference attack against an eps-private mechanism; in [0.5, 1].
double MiaSuccessBound(double eps);

// Conversion (1 - e^-eps)/2 from a pure membership-privacy parameter to the
// corresponding inference-advantage level.
double PmpToMipEta(double eps);

// Post-processing: merges outcome a into label_map[a] (values in
// [0, out_size)) and sums the masses.
DiscretePMF MergeOutcomes(const DiscretePMF& pmf, std::span<const int> label_map,
                          int out_size);

}  // namespace pmpaudit

#endif  // PMPAUDIT_CORE_H_
