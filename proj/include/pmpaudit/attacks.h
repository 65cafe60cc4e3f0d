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

#ifndef PMPAUDIT_ATTACKS_H_
#define PMPAUDIT_ATTACKS_H_

#include <vector>

#include "pmpaudit/types.h"

// Attack oracles: the Bayes-optimal membership attacker against the mixture
// distributions (the practical attacker who only knows the parent set), the
// optimal distinguisher between two known neighboring datasets (the
// worst-case attacker), and the modular-addition counterexample separating
// membership privacy from DP.

namespace pmpaudit {

struct AttackReport {
  int target_index = 0;
  // Success probability of the Bayes-optimal practical attacker,
  // sum_a (1/2) max(p_in(a), p_out(a)); in [0.5, 1].
  double success_prob = 0.5;
  // Ceiling 1/(1 + e^-eps) from the exact pure membership-privacy parameter
  // of the mechanism (1.0 when that parameter is infinite).
  double bound = 0.5;
  // Decision rule: guess "in" on outcome a iff guess_in[a].
  std::vector<bool> guess_in;
};

// Deterministic modular-addition mechanism: point mass on sum(D) mod 6.
// Requires n = 3 and integer parent entries in {0, ..., 5} (so the parent is
// exactly (0, 1, 2, 3, 4, 5) up to order).
DiscretePMF Mod6Pmf(const ParentSet& parent, SubsetSelector d);

// The parent set (0, 1, 2, 3, 4, 5) as 1-d points.
ParentSet MakeMod6Parent();

// Bayes-optimal practical membership attack for one target, with prior
// P(x in D) = 1/2. Ties p_in(a) = p_out(a) resolve to "in" so the report is
// deterministic; any tie resolution is optimal.
AttackReport BayesPracticalMia(const FiniteMechanism& mech,
                               const ParentSet& parent, int target);

// Optimal distinguishing success sum_a (1/2) max(p_D(a), p_D'(a)) between
// the two worlds of an attacker who knows all of D except one swapped
// sample. Throws std::invalid_argument unless D and D' are adjacent.
double WorstCaseMia(const FiniteMechanism& mech, const ParentSet& parent,
                    SubsetSelector d, SubsetSelector dprime);

}  // namespace pmpaudit

#endif  // PMPAUDIT_ATTACKS_H_
