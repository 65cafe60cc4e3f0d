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

#include "pmpaudit/core.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmpaudit/kernels.h"

namespace pmpaudit {

namespace {

// |ln(p/q)| for one atom; 0 when the atom is outside both supports, infinite
// when it is in exactly one.
double AtomLogRatio(double p, double q) {
  if (p == 0.0 && q == 0.0) return 0.0;
  if (p == 0.0 || q == 0.0) return kInfiniteEps;
  return std::fabs(std::log(p / q));
}

std::vector<double> AverageRows(const MechanismTable& table,
                                const std::vector<SubsetSelector>& subsets) {
  std::vector<double> acc(table.alphabet_size, 0.0);
  for (SubsetSelector s : subsets) {
    const DiscretePMF& pmf = table.pmfs[table.rank[s.bits]];
    for (int a = 0; a < table.alphabet_size; ++a) acc[a] += pmf.mass(a);
  }
  const double total = kern::Sum(acc.data(), acc.size());
  for (double& v : acc) v /= total;
  return acc;
}

}  // namespace

MechanismTable BuildMechanismTable(const FiniteMechanism& mech,
                                   const ParentSet& parent) {
  MechanismTable table;
  const auto masks = EnumerateMasks(parent.size(), parent.n());
  table.subsets.reserve(masks.size());
  table.pmfs.reserve(masks.size());
  table.rank.assign(std::size_t{1} << parent.size(), -1);
  for (std::uint32_t mask : masks) {
    SubsetSelector s{mask};
    DiscretePMF pmf = mech(parent, s);
    if (table.pmfs.empty()) {
      table.alphabet_size = pmf.size();
    } else if (pmf.size() != table.alphabet_size) {
      throw std::invalid_argument(
          "BuildMechanismTable: mechanism returned PMFs with inconsistent "
          "alphabets");
    }
    table.rank[mask] = static_cast<int>(table.subsets.size());
    table.subsets.push_back(s);
    table.pmfs.push_back(std::move(pmf));
  }
  return table;
}

double HockeyStickDivergence(const DiscretePMF& p, const DiscretePMF& q,
                             double eps) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("HockeyStickDivergence: alphabet mismatch");
  }
  if (!(eps >= 0.0)) {
    throw std::domain_error("HockeyStickDivergence: eps must be >= 0");
  }
  const double v = kern::HockeyStickSum(p.masses().data(), q.masses().data(),
                                        p.size(), std::exp(eps));
  return std::clamp(v, 0.0, 1.0);
}

MixturePair BuildMixtures(const FiniteMechanism& mech, const ParentSet& parent,
                          int target) {
  return BuildMixtures(BuildMechanismTable(mech, parent), parent, target);
}

MixturePair BuildMixtures(const MechanismTable& table, const ParentSet& parent,
                          int target) {
  const auto [in_sets, out_sets] = SplitInOut(parent, target);
  const std::uint64_t expected = Binomial(parent.size(), parent.n()) / 2;
  if (in_sets.size() != expected || out_sets.size() != expected) {
    throw std::logic_error("BuildMixtures: half-subset counts are off");
  }
  return MixturePair{DiscretePMF(AverageRows(table, in_sets)),
                     DiscretePMF(AverageRows(table, out_sets)), target};
}

PrivacyParams PmpExactPure(const FiniteMechanism& mech,
                           const ParentSet& parent) {
  return PmpExactPure(BuildMechanismTable(mech, parent), parent);
}

PrivacyParams PmpExactPure(const MechanismTable& table,
                           const ParentSet& parent) {
  double eps = 0.0;
  for (int target = 0; target < parent.size(); ++target) {
    const MixturePair mix = BuildMixtures(table, parent, target);
    for (int a = 0; a < table.alphabet_size; ++a) {
      eps = std::max(eps, AtomLogRatio(mix.p_in.mass(a), mix.p_out.mass(a)));
    }
    if (eps == kInfiniteEps) break;
  }
  return {eps, 0.0};
}

double PmpDeltaAtEps(const FiniteMechanism& mech, const ParentSet& parent,
                     double eps) {
  return PmpDeltaAtEps(BuildMechanismTable(mech, parent), parent, eps);
}

double PmpDeltaAtEps(const MechanismTable& table, const ParentSet& parent,
                     double eps) {
  double delta = 0.0;
  for (int target = 0; target < parent.size(); ++target) {
    const MixturePair mix = BuildMixtures(table, parent, target);
    delta = std::max(delta, HockeyStickDivergence(mix.p_in, mix.p_out, eps));
    delta = std::max(delta, HockeyStickDivergence(mix.p_out, mix.p_in, eps));
  }
  return delta;
}

PrivacyParams SubpopDpExactPure(const FiniteMechanism& mech,
                                const ParentSet& parent) {
  return SubpopDpExactPure(BuildMechanismTable(mech, parent), parent);
}

PrivacyParams SubpopDpExactPure(const MechanismTable& table,
                                const ParentSet& parent) {
  double eps = 0.0;
  const int size = parent.size();
  for (std::size_t si = 0; si < table.subsets.size(); ++si) {
    const SubsetSelector s = table.subsets[si];
    const DiscretePMF& p = table.pmfs[si];
    for (int i = 0; i < size; ++i) {
      if (!s.Contains(i)) continue;
      for (int y = i + 1; y < size; ++y) {
        if (s.Contains(y)) continue;
        // Each unordered adjacent pair is visited once: swap-out index i is
        // below swap-in index y.
        const std::uint32_t other = s.bits ^ (1u << i) ^ (1u << y);
        const DiscretePMF& q = table.pmfs[table.rank[other]];
        for (int a = 0; a < table.alphabet_size; ++a) {
          eps = std::max(eps, AtomLogRatio(p.mass(a), q.mass(a)));
        }
        if (eps == kInfiniteEps) return {eps, 0.0};
      }
    }
  }
  return {eps, 0.0};
}

double MiaSuccessBound(double eps) {
  if (!(eps >= 0.0)) {
    throw std::domain_error("MiaSuccessBound: eps must be >= 0");
  }
  return 1.0 / (1.0 + std::exp(-eps));
}

double PmpToMipEta(double eps) {
  if (!(eps >= 0.0)) {
    throw std::domain_error("PmpToMipEta: eps must be >= 0");
  }
  return (1.0 - std::exp(-eps)) / 2.0;
}

DiscretePMF MergeOutcomes(const DiscretePMF& pmf, std::span<const int> label_map,
                          int out_size) {
  if (static_cast<int>(label_map.size()) != pmf.size() || out_size <= 0) {
    throw std::invalid_argument("MergeOutcomes: bad label map");
  }
  std::vector<double> mass(out_size, 0.0);
  for (int a = 0; a < pmf.size(); ++a) {
    const int to = label_map[a];
    if (to < 0 || to >= out_size) {
      throw std::invalid_argument("MergeOutcomes: label out of range");
    }
    mass[to] += pmf.mass(a);
  }
  return DiscretePMF(std::move(mass));
}

}  // namespace pmpaudit
