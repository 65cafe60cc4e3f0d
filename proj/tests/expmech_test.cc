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

#include "pmpaudit/expmech.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "pmpaudit/core.h"
#include "pmpaudit/synthdata.h"
#include "pmpaudit/verify.h"

namespace {

using namespace pmpaudit;

CandidateSet PlusMinusOne() { return CandidateSet({1.0, -1.0}, 2, 1); }

TEST_CASE("candidate set validation") {
  CHECK_THROWS_AS(CandidateSet({1.0, 2.0}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(CandidateSet({1.0}, 1, 1), std::invalid_argument);
  CHECK_NOTHROW(CandidateSet({0.6, 0.8, 0.0, 1.0}, 2, 2));
}

TEST_CASE("geometric-median loss") {
  // All dataset points at the candidate.
  CHECK(GeomedianLoss(std::vector<double>{0.5, 0.5},
                      {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}) == 0.0);
  // Symmetric distances in 1-d.
  CHECK(GeomedianLoss(std::vector<double>{0.0}, {{1.0}, {-1.0}}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // Hand arithmetic: (1 + sqrt(2) + 1) / 3.
  CHECK(GeomedianLoss(std::vector<double>{1.0, 0.0},
                      {{0.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}}) ==
        doctest::Approx((2.0 + std::numbers::sqrt2) / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(GeomedianLoss(std::vector<double>{1.0}, {{1.0, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("loss sensitivity over the clipped ball") {
  CHECK(LossSensitivityForNorm(1.0, 10.0, 6) ==
        doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(LossSensitivityForNorm(1.0, 1.0, 1) == doctest::Approx(2.0));
  CHECK(LossSensitivityForNorm(0.0, 5.0, 1) == doctest::Approx(5.0));

  // Grid cross-check in d = 2: the largest |l(w,D) - l(w,D')| over single
  // swaps inside the ball, scanned over a polar grid, never exceeds the
  // closed form and gets close to it.
  const double clip = 3.0;
  const CandidateSet cands({1.0, 0.0, 0.0, 1.0}, 2, 2);
  const double closed = LossSensitivity(clip, cands, 1);
  double best = 0.0;
  for (int j = 0; j < cands.m(); ++j) {
    const auto w = cands.point(j);
    for (int ri = 0; ri <= 20; ++ri) {
      for (int ai = 0; ai < 48; ++ai) {
        const double r = clip * ri / 20.0;
        const double th = 2.0 * std::numbers::pi * ai / 48.0;
        const std::vector<double> x{r * std::cos(th), r * std::sin(th)};
        for (int ri2 = 0; ri2 <= 20; ++ri2) {
          for (int ai2 = 0; ai2 < 48; ++ai2) {
            const double r2 = clip * ri2 / 20.0;
            const double th2 = 2.0 * std::numbers::pi * ai2 / 48.0;
            const std::vector<double> x2{r2 * std::cos(th2), r2 * std::sin(th2)};
            best = std::max(best, std::fabs(GeomedianLoss(w, {x}) -
                                            GeomedianLoss(w, {x2})));
          }
        }
      }
    }
  }
  CHECK(best <= closed + 1e-12);
  CHECK(best >= 0.98 * closed);
}

TEST_CASE("mechanism output law") {
  const CandidateSet cands = PlusMinusOne();
  // Two-term softmax with losses 0 and 2 * sensitivity at eps = 1.
  const DiscretePMF pmf =
      ExpMechPmf({{1.0}}, cands, ExpMechConfig{1.0, 1.0, 10.0});
  const double e = std::numbers::e;
  CHECK(pmf.mass(0) == doctest::Approx(e / (e + 1.0)).epsilon(1e-14));
  CHECK(pmf.mass(1) == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-14));

  // eps -> 0 limit: uniform.
  const DiscretePMF tiny =
      ExpMechPmf({{1.0}}, cands, ExpMechConfig{1e-12, 1.0, 10.0});
  CHECK(tiny.mass(0) == doctest::Approx(0.5).epsilon(1e-9));

  // Equidistant candidates: uniform at any eps.
  const DiscretePMF equi =
      ExpMechPmf({{0.0}}, cands, ExpMechConfig{3.0, 1.0, 10.0});
  CHECK(equi.mass(0) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(ExpMechPmf({{1.0}}, cands, ExpMechConfig{-1.0, 1.0, 10.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExpMechPmf({{std::numeric_limits<double>::infinity()}}, cands,
                             ExpMechConfig{1.0, 1.0, 10.0}),
                  std::domain_error);
}

TEST_CASE("membership-privacy parameter of the mechanism") {
  // Near-identical parent points: indistinguishable mixtures.
  std::vector<double> pts(8);
  for (int i = 0; i < 8; ++i) pts[i] = 0.5 + i * 1e-15;
  const ParentSet parent(std::move(pts), 4, 1);
  const CandidateSet cands = PlusMinusOne();
  const ExpMechConfig cfg{2.0, LossSensitivity(10.0, cands, 4), 10.0};
  CHECK(ExpMechPmp(parent, cands, cfg).eps <= 1e-9);
  CHECK(ExpMechSubpopDp(parent, cands, cfg).eps <= 1e-9);

  // n = 1: the membership parameter equals the subpopulation DP parameter.
  GenSpec spec;
  spec.n = 1;
  spec.d = 2;
  spec.m = 3;
  spec.clip = 2.0;
  spec.seed = 31;
  const Instance inst = MakeInstance(spec);
  const ExpMechConfig cfg1{1.7, LossSensitivity(2.0, *inst.candidates, 1), 2.0};
  CHECK(ExpMechPmp(inst.parent, *inst.candidates, cfg1).eps ==
        doctest::Approx(
            ExpMechSubpopDp(inst.parent, *inst.candidates, cfg1).eps)
            .epsilon(1e-12));

  // Random instance against the generic brute-force oracle.
  GenSpec spec2;
  spec2.n = 2;
  spec2.d = 1;
  spec2.m = 3;
  spec2.clip = 3.0;
  spec2.seed = 77;
  const Instance inst2 = MakeInstance(spec2);
  const CandidateSet& c2 = *inst2.candidates;
  const ExpMechConfig cfg2{4.0, LossSensitivity(3.0, c2, 2), 3.0};
  const FiniteMechanism mech = [&c2, cfg2](const ParentSet& p, SubsetSelector s) {
    return ExpMechPmf(p, s, c2, cfg2);
  };
  CHECK(ExpMechPmp(inst2.parent, c2, cfg2).eps ==
        doctest::Approx(PmpExactPure(mech, inst2.parent).eps).epsilon(1e-11));
  CHECK(ExpMechSubpopDp(inst2.parent, c2, cfg2).eps ==
        doctest::Approx(SubpopDpExactPure(mech, inst2.parent).eps)
            .epsilon(1e-11));
  // Worst-case parameter dominates the restriction.
  CHECK(ExpMechSubpopDp(inst2.parent, c2, cfg2).eps <= cfg2.eps_dp + 1e-12);
}

TEST_CASE("calibration to a subpopulation DP target") {
  GenSpec spec;
  spec.n = 3;
  spec.d = 2;
  spec.m = 4;
  spec.clip = 3.0;
  spec.seed = 2024;
  const Instance inst = MakeInstance(spec);
  const CandidateSet& cands = *inst.candidates;

  // Round trip: measure eps(X) of a known config, calibrate to it.
  const double sens = LossSensitivity(spec.clip, cands, spec.n);
  const ExpMechConfig known{5.0, sens, spec.clip};
  const double target = ExpMechSubpopDp(inst.parent, cands, known).eps;
  const ExpMechConfig found =
      CalibrateExpMechToSubpopDp(inst.parent, cands, spec.clip, target);
  CHECK(found.eps_dp == doctest::Approx(5.0).epsilon(1e-5));

  // Residual of a fresh calibration.
  const ExpMechConfig cal =
      CalibrateExpMechToSubpopDp(inst.parent, cands, spec.clip, 2.0);
  CHECK(ExpMechSubpopDp(inst.parent, cands, cal).eps ==
        doctest::Approx(2.0).epsilon(1e-6));

  // A mechanism that cannot reach the target: parent points on the
  // perpendicular bisector of the two candidates are equidistant from both,
  // so the output law is uniform and eps(X) stays 0 for every mechanism eps.
  const CandidateSet two({1.0, 0.0, 0.0, 1.0}, 2, 2);
  const ParentSet bisector({0.0, 0.0, 1.0, 1.0}, 1, 2);
  CHECK_THROWS_AS(CalibrateExpMechToSubpopDp(bisector, two, 3.0, 5.0),
                  CalibrationError);
}

}  // namespace
