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

#include "pmpaudit/verify.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pmpaudit/attacks.h"
#include "pmpaudit/expmech.h"
#include "pmpaudit/experiments.h"
#include "pmpaudit/gaussmech.h"
#include "pmpaudit/rng.h"
#include "pmpaudit/synthdata.h"

namespace pmpaudit {

namespace {

double AtomLogRatio(double p, double q) {
  if (p == 0.0 && q == 0.0) return 0.0;
  if (p == 0.0 || q == 0.0) return kInfiniteEps;
  return std::fabs(std::log(p / q));
}

bool CloseOrBothInfinite(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

// a <= b with infinity as top element and a small additive slack.
bool LeqWithSlack(double a, double b, double slack) {
  if (std::isinf(b)) return true;
  if (std::isinf(a)) return false;
  return a <= b + slack;
}

CheckResult Pass(const std::string& name, const std::string& detail = "") {
  return {name, true, detail};
}

CheckResult Fail(const std::string& name, const std::string& detail) {
  return {name, false, detail};
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

// Random exponential-mechanism instance on clipped standard-normal data.
struct ExpInstance {
  CandidateSet cands;
  ParentSet parent;
  ExpMechConfig cfg;
};

ExpInstance RandomExpInstance(std::uint64_t seed, int n, int m, int d,
                              double clip) {
  GenSpec spec;
  spec.n = n;
  spec.d = d;
  spec.m = m;
  spec.sigma_data = 1.0;
  spec.clip = clip;
  spec.center = CenterKind::kOrigin;
  spec.seed = seed;
  Instance inst = MakeInstance(spec);
  SplitMix64 rng(seed ^ 0xABCDEF0123456789ULL);
  ExpMechConfig cfg;
  cfg.clip = clip;
  cfg.sensitivity = LossSensitivity(clip, *inst.candidates, n);
  cfg.eps_dp = 0.5 + 7.5 * rng.NextUnit();
  return ExpInstance{std::move(*inst.candidates), std::move(inst.parent), cfg};
}

FiniteMechanism WrapExpMech(const CandidateSet& cands, const ExpMechConfig& cfg) {
  return [&cands, cfg](const ParentSet& parent, SubsetSelector s) {
    return ExpMechPmf(parent, s, cands, cfg);
  };
}

}  // namespace

FiniteMechanism RandomMechanism(int alphabet, std::uint64_t seed) {
  return [alphabet, seed](const ParentSet&, SubsetSelector s) {
    SplitMix64 rng(seed ^ (static_cast<std::uint64_t>(s.bits) *
                           0xD1B54A32D192ED03ULL));
    std::vector<double> mass(alphabet);
    double total = 0.0;
    for (double& v : mass) {
      v = 0.05 + rng.NextUnit();
      total += v;
    }
    for (double& v : mass) v /= total;
    return DiscretePMF(std::move(mass));
  };
}

ParentSet MakeIndexParent(int n) {
  std::vector<double> pts(2 * n);
  std::iota(pts.begin(), pts.end(), 0.0);
  return ParentSet(std::move(pts), n, 1);
}

double PmpEpsilonFromConditionalEvents(const MechanismTable& table,
                                       const ParentSet& parent) {
  const int k = table.alphabet_size;
  if (k > 20) {
    throw std::invalid_argument("event enumeration limited to 20 outcomes");
  }
  double eps = 0.0;
  for (int target = 0; target < parent.size(); ++target) {
    const MixturePair mix = BuildMixtures(table, parent, target);
    for (std::uint32_t event = 1; event < (1u << k); ++event) {
      double pin = 0.0, pout = 0.0;
      for (int a = 0; a < k; ++a) {
        if ((event >> a) & 1u) {
          pin += mix.p_in.mass(a);
          pout += mix.p_out.mass(a);
        }
      }
      eps = std::max(eps, AtomLogRatio(pin, pout));
    }
  }
  return eps;
}

double PmpEpsilonFromPosteriorEvents(const MechanismTable& table,
                                     const ParentSet& parent) {
  const int k = table.alphabet_size;
  if (k > 20) {
    throw std::invalid_argument("event enumeration limited to 20 outcomes");
  }
  constexpr double kPrior = 0.5;  // P(x in D) under the uniform half-subset draw
  double eps = 0.0;
  for (int target = 0; target < parent.size(); ++target) {
    const MixturePair mix = BuildMixtures(table, parent, target);
    for (std::uint32_t event = 1; event < (1u << k); ++event) {
      double pin = 0.0, pout = 0.0;
      for (int a = 0; a < k; ++a) {
        if ((event >> a) & 1u) {
          pin += mix.p_in.mass(a);
          pout += mix.p_out.mass(a);
        }
      }
      const double marginal = kPrior * pin + (1.0 - kPrior) * pout;
      if (marginal == 0.0) continue;
      const double post_in = kPrior * pin / marginal;
      const double post_out = (1.0 - kPrior) * pout / marginal;
      eps = std::max(eps, AtomLogRatio(post_in, post_out));
    }
  }
  return eps;
}

double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("SpearmanCorrelation: need equal sizes >= 2");
  }
  const auto ranks = [](std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace checks {

CheckResult PartitionCounts() {
  for (int n = 1; n <= 8; ++n) {
    const ParentSet parent = MakeIndexParent(n);
    const std::uint64_t expected = Binomial(2 * n, n) / 2;
    for (int target = 0; target < 2 * n; ++target) {
      const auto [in_sets, out_sets] = SplitInOut(parent, target);
      if (in_sets.size() != expected || out_sets.size() != expected) {
        return Fail("core/partition-counts",
                    "n=" + std::to_string(n) + " target=" +
                        std::to_string(target) + " sizes " +
                        std::to_string(in_sets.size()) + "/" +
                        std::to_string(out_sets.size()) + " expected " +
                        std::to_string(expected));
      }
    }
  }
  return Pass("core/partition-counts", "n = 1..8, all targets");
}

CheckResult NeighborCounts() {
  for (int n = 1; n <= 6; ++n) {
    const ParentSet parent = MakeIndexParent(n);
    for (int target = 0; target < 2 * n; ++target) {
      const auto [in_sets, out_sets] = SplitInOut(parent, target);
      std::vector<int> reached(std::size_t{1} << (2 * n), 0);
      for (SubsetSelector d : in_sets) {
        const auto neighbors = AdjacentOutNeighbors(d, parent, target);
        if (static_cast<int>(neighbors.size()) != n) {
          return Fail("core/neighbor-counts", "wrong neighbor count");
        }
        for (SubsetSelector nb : neighbors) {
          if (nb.Contains(target)) {
            return Fail("core/neighbor-counts", "neighbor contains target");
          }
          ++reached[nb.bits];
        }
      }
      for (SubsetSelector d : out_sets) {
        if (reached[d.bits] != n) {
          return Fail("core/neighbor-counts",
                      "out-subset reached " + std::to_string(reached[d.bits]) +
                          " times, expected " + std::to_string(n));
        }
      }
    }
  }
  return Pass("core/neighbor-counts", "n = 1..6, aggregation balanced");
}

CheckResult FormulationEquivalence() {
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    const int k = 2 + (i / 3) % 3;
    const ParentSet parent = MakeIndexParent(n);
    const MechanismTable table =
        BuildMechanismTable(RandomMechanism(k, 1000 + i), parent);
    const double e_singleton = PmpExactPure(table, parent).eps;
    const double e_conditional = PmpEpsilonFromConditionalEvents(table, parent);
    const double e_posterior = PmpEpsilonFromPosteriorEvents(table, parent);
    if (!CloseOrBothInfinite(e_singleton, e_conditional, 1e-12) ||
        !CloseOrBothInfinite(e_singleton, e_posterior, 1e-12)) {
      return Fail("core/formulation-equivalence",
                  "instance " + std::to_string(i) + ": singleton=" +
                      Fmt(e_singleton) + " conditional=" + Fmt(e_conditional) +
                      " posterior=" + Fmt(e_posterior));
    }
  }
  return Pass("core/formulation-equivalence",
              "100 random mechanisms, three formulations within 1e-12");
}

CheckResult TwoPointCollapse() {
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + i % 4;
    const ParentSet parent = MakeIndexParent(1);
    const MechanismTable table =
        BuildMechanismTable(RandomMechanism(k, 2000 + i), parent);
    const double pmp = PmpExactPure(table, parent).eps;
    const double dpx = SubpopDpExactPure(table, parent).eps;
    if (!CloseOrBothInfinite(pmp, dpx, 1e-12)) {
      return Fail("core/two-point-collapse",
                  "instance " + std::to_string(i) + ": pmp=" + Fmt(pmp) +
                      " dpX=" + Fmt(dpx));
    }
  }
  return Pass("core/two-point-collapse", "100 random n = 1 instances within 1e-12");
}

CheckResult MixtureOrdering() {
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 2;
    const int k = 2 + i % 3;
    const ParentSet parent = MakeIndexParent(n);
    const MechanismTable table =
        BuildMechanismTable(RandomMechanism(k, 3000 + i), parent);
    const double pmp = PmpExactPure(table, parent).eps;
    const double dpx = SubpopDpExactPure(table, parent).eps;
    if (!LeqWithSlack(pmp, dpx, 1e-12)) {
      return Fail("core/mixture-ordering",
                  "instance " + std::to_string(i) + ": pmp=" + Fmt(pmp) +
                      " > dpX=" + Fmt(dpx));
    }
  }
  // The deterministic counterexample: finite membership-privacy parameter,
  // infinite subpopulation DP.
  const ParentSet mod6 = MakeMod6Parent();
  const MechanismTable table = BuildMechanismTable(Mod6Pmf, mod6);
  if (SubpopDpExactPure(table, mod6).eps != kInfiniteEps ||
      PmpExactPure(table, mod6).eps == kInfiniteEps) {
    return Fail("core/mixture-ordering", "mod-6 separation broken");
  }
  return Pass("core/mixture-ordering", "eps~(X) <= eps(X) on 100 instances");
}

CheckResult PostProcessing() {
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    const int k = 3 + i % 4;
    const ParentSet parent = MakeIndexParent(n);
    const FiniteMechanism mech = RandomMechanism(k, 4000 + i);

    SplitMix64 rng(9000 + i);
    const int k_out = 1 + static_cast<int>(rng.NextUnit() * k);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = k - 1; j > 0; --j) {
      std::swap(perm[j], perm[static_cast<int>(rng.NextUnit() * (j + 1))]);
    }
    std::vector<int> label_map(k);
    for (int j = 0; j < k; ++j) {
      label_map[perm[j]] =
          j < k_out ? j : static_cast<int>(rng.NextUnit() * k_out);
    }

    const FiniteMechanism merged = [mech, label_map,
                                    k_out](const ParentSet& p, SubsetSelector s) {
      return MergeOutcomes(mech(p, s), label_map, k_out);
    };
    const double before = PmpExactPure(mech, parent).eps;
    const double after = PmpExactPure(merged, parent).eps;
    if (!LeqWithSlack(after, before, 1e-12)) {
      return Fail("core/post-processing",
                  "instance " + std::to_string(i) + ": merged " + Fmt(after) +
                      " > original " + Fmt(before));
    }
  }
  return Pass("core/post-processing", "100 random label merges never increase eps");
}

CheckResult HockeyStickBasics() {
  const ParentSet parent = MakeIndexParent(2);
  for (int i = 0; i < 50; ++i) {
    const FiniteMechanism mech = RandomMechanism(4, 5000 + i);
    const DiscretePMF p = mech(parent, SubsetSelector{0b0011});
    const DiscretePMF q = mech(parent, SubsetSelector{0b1100});
    double prev = 2.0;
    for (double eps : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double v = HockeyStickDivergence(p, q, eps);
      if (v > prev + 1e-15) {
        return Fail("core/hockey-stick", "not non-increasing in eps");
      }
      prev = v;
    }
    if (HockeyStickDivergence(p, p, 0.37 * i) != 0.0) {
      return Fail("core/hockey-stick", "nonzero divergence for P = Q");
    }
  }
  return Pass("core/hockey-stick", "monotone in eps; zero at P = Q");
}

CheckResult ExpMechOrderingChain() {
  for (int i = 0; i < 100; ++i) {
    const ExpInstance inst = RandomExpInstance(6000 + i, 2 + i % 3, 2 + i % 3,
                                               1 + i % 2, 3.0);
    const double pmp = ExpMechPmp(inst.parent, inst.cands, inst.cfg).eps;
    const double dpx = ExpMechSubpopDp(inst.parent, inst.cands, inst.cfg).eps;
    const double slack = 1e-9 * (1.0 + inst.cfg.eps_dp);
    if (!(pmp <= dpx + slack && dpx <= inst.cfg.eps_dp + slack)) {
      return Fail("expmech/ordering-chain",
                  "instance " + std::to_string(i) + ": " + Fmt(pmp) + " / " +
                      Fmt(dpx) + " / " + Fmt(inst.cfg.eps_dp));
    }
  }
  return Pass("expmech/ordering-chain",
              "eps~(X) <= eps(X) <= eps on 100 instances");
}

CheckResult ExpMechOracleAgreement() {
  for (int i = 0; i < 50; ++i) {
    const ExpInstance inst =
        RandomExpInstance(7000 + i, 2 + i % 2, 2 + i % 3, 1 + i % 2, 3.0);
    const MechanismTable table =
        BuildMechanismTable(WrapExpMech(inst.cands, inst.cfg), inst.parent);
    const double pmp_direct = ExpMechPmp(inst.parent, inst.cands, inst.cfg).eps;
    const double pmp_oracle = PmpExactPure(table, inst.parent).eps;
    const double dpx_direct =
        ExpMechSubpopDp(inst.parent, inst.cands, inst.cfg).eps;
    const double dpx_oracle = SubpopDpExactPure(table, inst.parent).eps;
    if (std::fabs(pmp_direct - pmp_oracle) > 1e-10 ||
        std::fabs(dpx_direct - dpx_oracle) > 1e-10) {
      return Fail("expmech/oracle-agreement",
                  "instance " + std::to_string(i) + ": pmp " +
                      Fmt(pmp_direct) + " vs " + Fmt(pmp_oracle) + ", dpX " +
                      Fmt(dpx_direct) + " vs " + Fmt(dpx_oracle));
    }
  }
  return Pass("expmech/oracle-agreement",
              "matches generic brute force within 1e-10 (n <= 3, m <= 4)");
}

CheckResult ExpMechScaleInvariance() {
  for (int i = 0; i < 20; ++i) {
    const ExpInstance inst =
        RandomExpInstance(8000 + i, 2 + i % 2, 2 + i % 3, 1 + i % 2, 3.0);
    const double pmp = ExpMechPmp(inst.parent, inst.cands, inst.cfg).eps;
    const double dpx = ExpMechSubpopDp(inst.parent, inst.cands, inst.cfg).eps;
    for (double c : {1e-3, 7.0, 1e3}) {
      ExpMechConfig scaled = inst.cfg;
      scaled.eps_dp /= c;
      scaled.sensitivity /= c;
      const double pmp2 = ExpMechPmp(inst.parent, inst.cands, scaled).eps;
      const double dpx2 = ExpMechSubpopDp(inst.parent, inst.cands, scaled).eps;
      if (std::fabs(pmp - pmp2) > 1e-10 || std::fabs(dpx - dpx2) > 1e-10) {
        return Fail("expmech/scale-invariance",
                    "instance " + std::to_string(i) + " scale " + Fmt(c));
      }
    }
  }
  return Pass("expmech/scale-invariance",
              "losses x c with eps / c leave parameters unchanged");
}

CheckResult ExpMechSigmaRatioTrend() {
  // The shipped fig-1 configuration (see configs/fig1_sigma_sweep.json).
  ExperimentConfig config;
  config.kind = ExperimentKind::kExpMechSigmaSweep;
  config.sweep_values = {0.01, 0.03, 0.1, 0.3, 1.0};
  config.trials = 20;
  config.gen.n = 6;
  config.gen.d = 1;
  config.gen.m = 10;
  config.gen.clip = 10.0;
  config.gen.center = CenterKind::kOrigin;
  config.gen.seed = 777888999;
  config.target_eps_x = 5.0;
  const RunResult result = RunExperiment(config);
  std::vector<double> ratios;
  for (const SweepRow& row : result.mean_rows) {
    if (row.failed) return Fail("expmech/sigma-ratio-trend", "a sweep value failed");
    ratios.push_back(row.ratio);
  }
  const double rho = SpearmanCorrelation(config.sweep_values, ratios);
  if (!(rho > 0.9)) {
    return Fail("expmech/sigma-ratio-trend", "Spearman = " + Fmt(rho));
  }
  return Pass("expmech/sigma-ratio-trend",
              "20-seed mean ratio increasing in sigma (Spearman = " + Fmt(rho) +
                  ")");
}

CheckResult GaussBoundSoundness() {
  for (int i = 0; i < 100; ++i) {
    GenSpec spec;
    spec.n = 1 + i % 4;
    spec.d = 1;
    spec.sigma_data = 1.0;
    spec.clip = 3.0;
    spec.seed = 10000 + i;
    const Instance inst = MakeInstance(spec);
    SplitMix64 rng(20000 + i);
    const double sigma = 0.3 + 1.7 * rng.NextUnit();
    const double eps = 3.0 * rng.NextUnit();
    const int target = i % (2 * spec.n);
    const SumQuery query = MeanQuery(spec.n);
    const double oracle =
        MixtureDivergenceOracle1D(inst.parent, target, query, sigma, eps);
    const double bound =
        PmpDeltaBoundFast(inst.parent, target, query, sigma, eps);
    if (!(oracle <= bound + 1e-6)) {
      return Fail("gauss/certified-bound-soundness",
                  "instance " + std::to_string(i) + ": oracle " + Fmt(oracle) +
                      " > bound " + Fmt(bound));
    }
    if (spec.n == 1) {
      const double gap = std::fabs(inst.parent.point(0)[0] -
                                   inst.parent.point(1)[0]);
      const double exact = GaussMechDelta(gap, sigma, eps);
      if (std::fabs(oracle - exact) > 1e-6) {
        return Fail("gauss/certified-bound-soundness",
                    "n=1 quadrature vs closed form: " + Fmt(oracle) + " vs " +
                        Fmt(exact));
      }
    }
  }
  return Pass("gauss/certified-bound-soundness",
              "quadrature oracle <= certified bound on 100 1-d instances");
}

CheckResult GaussFastEqualsGeneral() {
  for (int i = 0; i < 40; ++i) {
    GenSpec spec;
    spec.n = 1 + i % 6;
    spec.d = 1 + i % 3;
    spec.sigma_data = 1.0;
    spec.clip = 3.0;
    spec.seed = 30000 + i;
    const Instance inst = MakeInstance(spec);
    SplitMix64 rng(40000 + i);
    const double sigma = 0.2 + 2.0 * rng.NextUnit();
    const double eps = 4.0 * rng.NextUnit();
    const int target = i % (2 * spec.n);
    const SumQuery query = MeanQuery(spec.n);
    const double fast = PmpDeltaBoundFast(inst.parent, target, query, sigma, eps);
    const double general =
        PmpDeltaBoundGeneral(inst.parent, target, query, sigma, eps);
    if (std::fabs(fast - general) > 1e-12) {
      return Fail("gauss/fast-equals-general",
                  "instance " + std::to_string(i) + ": " + Fmt(fast) + " vs " +
                      Fmt(general));
    }
  }
  return Pass("gauss/fast-equals-general",
              "collapsed average equals the double sum within 1e-12 (n <= 6)");
}

CheckResult GaussOrderingChain() {
  for (int i = 0; i < 100; ++i) {
    GenSpec spec;
    spec.n = 4 + 4 * (i % 3);
    spec.d = 1 + i % 3;
    spec.sigma_data = 1.0;
    spec.clip = 2.0 + 3.0 * ((i * 37) % 100) / 100.0;
    spec.seed = 50000 + i;
    const Instance inst = MakeInstance(spec);
    SplitMix64 rng(60000 + i);
    const double delta = 1e-2;
    const double target = 0.5 + 5.0 * rng.NextUnit();
    const double sigma =
        CalibrateGaussSigma(2.0 * spec.clip / spec.n, target, delta);
    const SumQuery query = MeanQuery(spec.n);
    const double eps_worst =
        GaussWorstCaseEpsilon(spec.clip, spec.n, sigma, delta).eps;
    const double eps_x =
        GaussSubpopDpEpsilon(inst.parent, query, sigma, delta).eps;
    const double eps_tilde =
        GaussPmpEpsilon(inst.parent, query, sigma, delta).eps;
    if (!(eps_tilde <= eps_x + 2e-6 && eps_x <= eps_worst + 2e-6)) {
      return Fail("gauss/ordering-chain",
                  "instance " + std::to_string(i) + ": " + Fmt(eps_tilde) +
                      " / " + Fmt(eps_x) + " / " + Fmt(eps_worst));
    }
  }
  return Pass("gauss/ordering-chain",
              "eps~(X) <= eps(X) <= eps on 100 instances");
}

CheckResult GaussCalibrationResiduals() {
  for (double sensitivity : {0.1, 1.0, 10.0}) {
    for (double eps : {0.1, 1.0, 10.0}) {
      for (double delta : {1e-6, 1e-3, 1e-1}) {
        const double sigma = CalibrateGaussSigma(sensitivity, eps, delta);
        const double residual = GaussMechDelta(sensitivity, sigma, eps);
        if (!(residual <= delta && residual >= delta * (1.0 - 1e-6))) {
          return Fail("gauss/calibration-residuals",
                      "residual " + Fmt(residual) + " for delta " + Fmt(delta));
        }
        const double eps_back = SmallestEpsForDelta(sensitivity, sigma, delta);
        if (std::fabs(eps_back - eps) > 1e-5) {
          return Fail("gauss/calibration-residuals",
                      "round trip " + Fmt(eps_back) + " vs " + Fmt(eps));
        }
      }
    }
  }
  return Pass("gauss/calibration-residuals",
              "27-point grid: residual in [delta(1 - 1e-6), delta], round trip 1e-5");
}

CheckResult GaussScaleInvariance() {
  for (double sensitivity : {0.2, 1.0, 4.0}) {
    for (double sigma : {0.5, 1.0, 3.0}) {
      for (double eps : {0.0, 0.7, 3.0}) {
        const double base = GaussMechDelta(sensitivity, sigma, eps);
        for (double c : {1e-3, 2.7, 1e4}) {
          const double scaled = GaussMechDelta(c * sensitivity, c * sigma, eps);
          if (std::fabs(base - scaled) > 1e-12) {
            return Fail("gauss/delta-scale-invariance",
                        Fmt(base) + " vs " + Fmt(scaled) + " at c=" + Fmt(c));
          }
        }
      }
    }
  }
  return Pass("gauss/delta-scale-invariance",
              "delta depends on (sensitivity, sigma) only through their ratio");
}

CheckResult AttacksMod6Separation() {
  const ParentSet parent = MakeMod6Parent();
  const MechanismTable table = BuildMechanismTable(Mod6Pmf, parent);
  const double pmp = PmpExactPure(table, parent).eps;
  if (std::fabs(pmp - std::log(2.0)) > 1e-12) {
    return Fail("attacks/mod6-separation", "pmp = " + Fmt(pmp) + ", want ln 2");
  }
  if (SubpopDpExactPure(table, parent).eps != kInfiniteEps) {
    return Fail("attacks/mod6-separation", "dpX should be infinite");
  }
  if (PmpDeltaAtEps(table, parent, std::log(2.0)) > 1e-12) {
    return Fail("attacks/mod6-separation", "delta at ln 2 should vanish");
  }
  return Pass("attacks/mod6-separation",
              "modular addition: eps~(X) = ln 2 exactly, eps(X) infinite");
}

CheckResult AttacksSuccessCeiling() {
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    const int k = 2 + i % 4;
    const ParentSet parent = MakeIndexParent(n);
    const FiniteMechanism mech = RandomMechanism(k, 70000 + i);
    for (int target = 0; target < 2 * n; ++target) {
      const AttackReport report = BayesPracticalMia(mech, parent, target);
      if (!(report.success_prob <= report.bound + 1e-12)) {
        return Fail("attacks/success-ceiling",
                    "instance " + std::to_string(i) + " target " +
                        std::to_string(target) + ": success " +
                        Fmt(report.success_prob) + " > bound " +
                        Fmt(report.bound));
      }
    }
  }
  return Pass("attacks/success-ceiling",
              "Bayes-optimal success <= 1/(1+e^-eps~) on 100 mechanisms");
}

CheckResult AttacksWorstCaseDominance() {
  for (int i = 0; i < 30; ++i) {
    const int n = 2 + i % 2;
    const int k = 2 + i % 3;
    const ParentSet parent = MakeIndexParent(n);
    const FiniteMechanism mech = RandomMechanism(k, 80000 + i);
    for (int target = 0; target < 2 * n; ++target) {
      const AttackReport report = BayesPracticalMia(mech, parent, target);
      const auto [in_sets, out_sets] = SplitInOut(parent, target);
      double best = 0.0;
      for (SubsetSelector d : in_sets) {
        for (SubsetSelector nb : AdjacentOutNeighbors(d, parent, target)) {
          best = std::max(best, WorstCaseMia(mech, parent, d, nb));
        }
      }
      if (!(best >= report.success_prob - 1e-12)) {
        return Fail("attacks/worst-case-dominance",
                    "instance " + std::to_string(i) + ": worst " + Fmt(best) +
                        " < practical " + Fmt(report.success_prob));
      }
    }
  }
  return Pass("attacks/worst-case-dominance",
              "knowing the neighbors never hurts the optimal attacker");
}

CheckResult AttacksBayesRuleOptimality() {
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 2;
    const int k = 2 + i % 11;
    const ParentSet parent = MakeIndexParent(n);
    const FiniteMechanism mech = RandomMechanism(k, 90000 + i);
    const MechanismTable table = BuildMechanismTable(mech, parent);
    for (int target = 0; target < 2 * n; ++target) {
      const AttackReport report = BayesPracticalMia(mech, parent, target);
      const MixturePair mix = BuildMixtures(table, parent, target);
      for (std::uint32_t rule = 0; rule < (1u << k); ++rule) {
        double success = 0.0;
        for (int a = 0; a < k; ++a) {
          success += 0.5 * (((rule >> a) & 1u) ? mix.p_in.mass(a)
                                               : mix.p_out.mass(a));
        }
        if (success > report.success_prob + 1e-12) {
          return Fail("attacks/bayes-rule-optimality",
                      "rule " + std::to_string(rule) + " beats the Bayes rule");
        }
      }
    }
  }
  return Pass("attacks/bayes-rule-optimality",
              "no deterministic rule beats the reported success (|A| <= 12)");
}

}  // namespace checks

std::vector<CheckResult> RunSuite(const std::string& suite) {
  std::vector<CheckResult> results;
  const bool all = suite == "all";
  if (all || suite == "core") {
    results.push_back(checks::PartitionCounts());
    results.push_back(checks::NeighborCounts());
    results.push_back(checks::FormulationEquivalence());
    results.push_back(checks::TwoPointCollapse());
    results.push_back(checks::MixtureOrdering());
    results.push_back(checks::PostProcessing());
    results.push_back(checks::HockeyStickBasics());
  }
  if (all || suite == "expmech") {
    results.push_back(checks::ExpMechOrderingChain());
    results.push_back(checks::ExpMechOracleAgreement());
    results.push_back(checks::ExpMechScaleInvariance());
    results.push_back(checks::ExpMechSigmaRatioTrend());
  }
  if (all || suite == "gauss") {
    results.push_back(checks::GaussBoundSoundness());
    results.push_back(checks::GaussFastEqualsGeneral());
    results.push_back(checks::GaussOrderingChain());
    results.push_back(checks::GaussCalibrationResiduals());
    results.push_back(checks::GaussScaleInvariance());
  }
  if (all || suite == "attacks") {
    results.push_back(checks::AttacksMod6Separation());
    results.push_back(checks::AttacksSuccessCeiling());
    results.push_back(checks::AttacksWorstCaseDominance());
    results.push_back(checks::AttacksBayesRuleOptimality());
  }
  if (results.empty()) {
    throw std::invalid_argument(
        "unknown suite '" + suite + "' (use core, expmech, gauss, attacks, all)");
  }
  return results;
}

bool AllPassed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace pmpaudit
