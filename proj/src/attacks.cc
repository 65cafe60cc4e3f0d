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

#include "pmpaudit/attacks.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pmpaudit/core.h"

namespace pmpaudit {

DiscretePMF Mod6Pmf(const ParentSet& parent, SubsetSelector d) {
  if (parent.n() != 3 || parent.d() != 1) {
    throw std::domain_error("Mod6Pmf: requires n = 3 and 1-d integer points");
  }
  ValidateSelector(d, parent);
  int sum = 0;
  for (int i = 0; i < parent.size(); ++i) {
    const double v = parent.point(i)[0];
    if (v != std::floor(v) || v < 0.0 || v > 5.0) {
      throw std::domain_error("Mod6Pmf: entries must be integers in {0..5}");
    }
    if (d.Contains(i)) sum += static_cast<int>(v);
  }
  std::vector<double> mass(6, 0.0);
  mass[sum % 6] = 1.0;
  return DiscretePMF(std::move(mass),
                     {"0", "1", "2", "3", "4", "5"});
}

ParentSet MakeMod6Parent() {
  return ParentSet({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, /*n=*/3, /*d=*/1);
}

AttackReport BayesPracticalMia(const FiniteMechanism& mech,
                               const ParentSet& parent, int target) {
  const MechanismTable table = BuildMechanismTable(mech, parent);
  const MixturePair mix = BuildMixtures(table, parent, target);

  AttackReport report;
  report.target_index = target;
  report.guess_in.resize(table.alphabet_size);
  double success = 0.0;
  for (int a = 0; a < table.alphabet_size; ++a) {
    const double pin = mix.p_in.mass(a);
    const double pout = mix.p_out.mass(a);
    report.guess_in[a] = pin >= pout;
    success += 0.5 * std::max(pin, pout);
  }
  report.success_prob = success;

  const double eps = PmpExactPure(table, parent).eps;
  report.bound = eps == kInfiniteEps ? 1.0 : MiaSuccessBound(eps);
  return report;
}

double WorstCaseMia(const FiniteMechanism& mech, const ParentSet& parent,
                    SubsetSelector d, SubsetSelector dprime) {
  ValidateSelector(d, parent);
  ValidateSelector(dprime, parent);
  if (std::popcount(d.bits ^ dprime.bits) != 2) {
    throw std::invalid_argument("WorstCaseMia: datasets are not adjacent");
  }
  const DiscretePMF p = mech(parent, d);
  const DiscretePMF q = mech(parent, dprime);
  if (p.size() != q.size()) {
    throw std::invalid_argument("WorstCaseMia: alphabet mismatch");
  }
  double success = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    success += 0.5 * std::max(p.mass(a), q.mass(a));
  }
  return success;
}

}  // namespace pmpaudit
