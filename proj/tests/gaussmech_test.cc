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

#include "pmpaudit/gaussmech.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "pmpaudit/synthdata.h"

namespace {

using namespace pmpaudit;

double NormalDensity(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

// Simpson quadrature of the standard normal density over [0, b].
double SimpsonNormalMass(double b, int steps) {
  const double h = b / steps;
  double s = NormalDensity(0.0) + NormalDensity(b);
  for (int i = 1; i < steps; ++i) {
    s += NormalDensity(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

TEST_CASE("standard normal cdf") {
  CHECK(StdNormalCdf(0.0) == 0.5);
  CHECK(StdNormalCdf(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(StdNormalCdf(-std::numeric_limits<double>::infinity()) == 0.0);
  // Frozen reference value plus an independent quadrature check.
  CHECK(std::fabs(StdNormalCdf(1.0) - 0.8413447460685429) <= 1e-14);
  CHECK(std::fabs(StdNormalCdf(1.0) - (0.5 + SimpsonNormalMass(1.0, 4000))) <=
        1e-10);
  CHECK(std::fabs(StdNormalCdf(0.5) - 0.6914624612740131) <= 1e-14);
  for (double t : {0.3, 1.7, 4.2, 7.9}) {
    CHECK(std::fabs(StdNormalCdf(t) + StdNormalCdf(-t) - 1.0) <= 1e-15);
  }
  CHECK_THROWS_AS(StdNormalCdf(NAN), std::domain_error);
}

TEST_CASE("log of the normal cdf stays accurate far in the tail") {
  // Frozen high-precision values.
  CHECK(StdNormalLogCdf(-8.0) ==
        doctest::Approx(-35.0134371599145499).epsilon(1e-13));
  CHECK(StdNormalLogCdf(-20.0) ==
        doctest::Approx(-203.9171553710972639).epsilon(1e-13));
  CHECK(StdNormalLogCdf(-37.5) ==
        doctest::Approx(-707.6689893175071911).epsilon(1e-13));
  CHECK(StdNormalLogCdf(-50.0) ==
        doctest::Approx(-1254.8313611394199013).epsilon(1e-13));
  CHECK(StdNormalLogCdf(-100.0) ==
        doctest::Approx(-5005.5242086942050886).epsilon(1e-13));
  // Across each evaluation-path boundary the finite difference matches the
  // analytic slope phi(t)/Phi(t) ~ |t| + 1/|t|, so the branches line up.
  for (double t : {-8.0, -37.0}) {
    const double h = 1e-6;
    const double jump = StdNormalLogCdf(t + h) - StdNormalLogCdf(t - h);
    const double slope = -t + 1.0 / -t;
    CHECK(jump == doctest::Approx(2.0 * h * slope).epsilon(1e-2));
  }
  CHECK(StdNormalLogCdf(1.0) == doctest::Approx(std::log(StdNormalCdf(1.0))));
}

TEST_CASE("exact delta of the Gaussian mechanism") {
  CHECK(GaussMechDelta(0.0, 1.0, 0.7) == 0.0);
  CHECK(GaussMechDelta(1.0, 1.0, 0.0) ==
        doctest::Approx(0.3829249225480261).epsilon(1e-13));
  // Large eps: both terms vanish.
  CHECK(GaussMechDelta(1.0, 1.0, 200.0) <= 1e-100);
  CHECK_THROWS_AS(GaussMechDelta(1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(GaussMechDelta(1.0, 1.0, -0.3), std::domain_error);

  // Trapezoid quadrature of max(0, p0(t) - e^eps pD(t)) over a wide grid as
  // an independent route to the same value.
  const double sensitivity = 1.0, sigma = 1.0, eps = 0.5;
  const double ratio = std::exp(eps);
  const double h = 1e-4;
  double integral = 0.0;
  for (double t = -14.0; t <= 14.0; t += h) {
    const double p = NormalDensity(t / sigma) / sigma;
    const double q = NormalDensity((t - sensitivity) / sigma) / sigma;
    integral += std::max(0.0, p - ratio * q) * h;
  }
  CHECK(GaussMechDelta(sensitivity, sigma, eps) ==
        doctest::Approx(integral).epsilon(1e-6));
}

TEST_CASE("sigma calibration") {
  // Inverse of the eps = 0 delta value above.
  CHECK(CalibrateGaussSigma(1.0, 0.0, 0.3829249225480261) ==
        doctest::Approx(1.0).epsilon(1e-6));

  // Doubling the sensitivity doubles sigma.
  const double s1 = CalibrateGaussSigma(1.0, 1.3, 1e-3);
  const double s2 = CalibrateGaussSigma(2.0, 1.3, 1e-3);
  CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-8));

  // Tightness: the returned sigma satisfies the condition and a hair less
  // violates it.
  const double sigma = CalibrateGaussSigma(1.0, 1.0, 1e-2);
  CHECK(GaussMechDelta(1.0, sigma, 1.0) <= 1e-2);
  CHECK(GaussMechDelta(1.0, sigma * (1.0 - 1e-9), 1.0) > 1e-2);

  // Fine-grid scan oracle: the first satisfying sigma on a 1e-7-relative
  // grid around the answer matches to 1e-6.
  double scan = sigma * (1.0 - 1e-5);
  while (GaussMechDelta(1.0, scan, 1.0) > 1e-2) scan += sigma * 1e-7;
  CHECK(std::fabs(scan - sigma) <= 1e-6 * sigma);

  CHECK_THROWS_AS(CalibrateGaussSigma(1.0, 1.0, 1.5), std::domain_error);

  // Large but reachable epsilon: the crossing sits near
  // sensitivity / (2 sqrt(2 eps)) and the bracket finds it.
  const double tiny = CalibrateGaussSigma(1.0, 1e9, 0.5);
  CHECK(GaussMechDelta(1.0, tiny, 1e9) <= 0.5);
  CHECK(GaussMechDelta(1.0, tiny * (1.0 - 1e-9), 1e9) > 0.5);
  // Beyond ~2^121 the violating sigma lies below the bracket floor.
  CHECK_THROWS_AS(CalibrateGaussSigma(1.0, 1e40, 0.5), CalibrationError);
}

TEST_CASE("membership bound for sum queries") {
  GenSpec spec;
  spec.n = 1;
  spec.d = 1;
  spec.clip = 3.0;
  spec.seed = 404;
  const Instance inst = MakeInstance(spec);
  const SumQuery query = MeanQuery(1);

  // n = 1: single term, equal to the exact pairwise delta.
  const double gap = std::fabs(inst.parent.point(0)[0] - inst.parent.point(1)[0]);
  CHECK(PmpDeltaBoundFast(inst.parent, 0, query, 0.7, 0.4) ==
        doctest::Approx(GaussMechDelta(gap, 0.7, 0.4)).epsilon(1e-14));

  // Constant query: every pair collapses, the bound is 0.
  const SumQuery constant{
      [](std::span<const double>) { return std::vector<double>{1.0}; }, "const"};
  GenSpec spec3 = spec;
  spec3.n = 3;
  spec3.seed = 405;
  const Instance inst3 = MakeInstance(spec3);
  CHECK(PmpDeltaBoundFast(inst3.parent, 2, constant, 0.7, 0.0) == 0.0);
  CHECK(PmpDeltaBoundGeneral(inst3.parent, 2, constant, 0.7, 0.0) == 0.0);
  CHECK(GaussPmpEpsilon(inst3.parent, constant, 0.7, 1e-2).eps == 0.0);

  // A far outlier dominates the average.
  const ParentSet outlier({0.0, 0.1, 0.2, 30.0}, 2, 1);
  const SumQuery mean2 = MeanQuery(2);
  const double bound = PmpDeltaBoundFast(outlier, 0, mean2, 0.5, 0.1);
  const double far = GaussMechDelta(15.0, 0.5, 0.1);
  const double near1 = GaussMechDelta(0.05, 0.5, 0.1);
  const double near2 = GaussMechDelta(0.1, 0.5, 0.1);
  CHECK(bound == doctest::Approx((far + near1 + near2) / 3.0).epsilon(1e-14));
  CHECK(bound >= far / 3.0);
}

TEST_CASE("subpopulation and worst-case parameters") {
  // Antipodal clipped pair at n = 1: the within-X sensitivity equals the
  // worst-case sensitivity, so the two parameters coincide.
  const double clip = 2.0;
  const ParentSet antipodal({clip, -clip}, 1, 1);
  const SumQuery query = MeanQuery(1);
  const double sigma = 1.3;
  const PrivacyParams sub = GaussSubpopDpEpsilon(antipodal, query, sigma, 1e-2);
  const PrivacyParams worst = GaussWorstCaseEpsilon(clip, 1, sigma, 1e-2);
  CHECK(sub.eps == doctest::Approx(worst.eps).epsilon(1e-9));

  // Round trip through sigma calibration.
  const double target = 2.5;
  const double cal = CalibrateGaussSigma(2.0 * clip, target, 1e-2);
  CHECK(GaussWorstCaseEpsilon(clip, 1, cal, 1e-2).eps ==
        doctest::Approx(target).epsilon(1e-5));

  // Monotone in the clip radius; vanishes as the domain collapses.
  CHECK(GaussWorstCaseEpsilon(2.0, 4, 1.0, 1e-2).eps >
        GaussWorstCaseEpsilon(1.0, 4, 1.0, 1e-2).eps);
  CHECK(GaussWorstCaseEpsilon(1e-9, 4, 1.0, 1e-2).eps <= 1e-6);
}

TEST_CASE("quadrature oracle") {
  GenSpec spec;
  spec.n = 2;
  spec.d = 1;
  spec.clip = 3.0;
  spec.seed = 811;
  const Instance inst = MakeInstance(spec);
  const SumQuery query = MeanQuery(2);

  // Identical mixtures under a constant query.
  const SumQuery constant{
      [](std::span<const double>) { return std::vector<double>{0.25}; }, "const"};
  CHECK(MixtureDivergenceOracle1D(inst.parent, 0, constant, 0.8, 0.2) <= 1e-12);

  // d != 1 is unsupported.
  GenSpec spec2 = spec;
  spec2.d = 2;
  spec2.seed = 812;
  const Instance inst2 = MakeInstance(spec2);
  CHECK_THROWS_AS(MixtureDivergenceOracle1D(inst2.parent, 0, MeanQuery(2), 0.8, 0.2),
                  std::invalid_argument);

  // Bounded by the certified average (the soundness direction).
  const double oracle = MixtureDivergenceOracle1D(inst.parent, 1, query, 0.6, 0.3);
  const double bound = PmpDeltaBoundFast(inst.parent, 1, query, 0.6, 0.3);
  CHECK(oracle <= bound + 1e-6);
}

}  // namespace
