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

#ifndef PMPAUDIT_GAUSSMECH_H_
#define PMPAUDIT_GAUSSMECH_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pmpaudit/types.h"

// Gaussian-mechanism analysis for sum queries q(D) = sum_{x in D} f(x): the
// exact (eps, delta)-DP condition
//
//   Phi(Delta/2sigma - eps*sigma/Delta) - e^eps Phi(-Delta/2sigma -
//   eps*sigma/Delta) <= delta,
//
// sigma calibration, a certified membership-privacy bound obtained by convex
// averaging of the per-pair divergences, and bisection inversion of that
// bound to the smallest certified privacy level.

namespace pmpaudit {

// A query of the form q(D) = sum_{x in D} f(x) for a sample-wise map f.
struct SumQuery {
  std::function<std::vector<double>(std::span<const double>)> per_sample;
  std::string label;
};

// The mean query f(x) = x / n.
SumQuery MeanQuery(int n);

// Standard normal CDF, absolute error below 1e-14; +-inf map to 1/0 and NaN
// throws std::domain_error.
double StdNormalCdf(double t);

// ln Phi(t), stable for arbitrarily negative t (erfc down to t about -37,
// asymptotic expansion beyond). Needed so that products e^eps * Phi(very
// negative) can be formed as exp(eps + logPhi) without underflow.
double StdNormalLogCdf(double t);

// Left side of the DP condition above; the smallest delta for which the
// mechanism with the given sensitivity and noise scale is (eps, delta)-DP.
// Returns 0 when the sensitivity is 0 (the limit value); clamped to [0, 1].
double GaussMechDelta(double l2_sensitivity, double sigma, double eps);

// Smallest sigma satisfying GaussMechDelta(Delta, sigma, eps) <= delta, by
// geometric bracketing and bisection to relative tolerance 1e-9: the result
// satisfies the condition while result*(1 - 1e-9) violates it.
double CalibrateGaussSigma(double l2_sensitivity, double eps, double delta);

// Smallest eps with GaussMechDelta(Delta, sigma, eps) <= delta, by bisection
// to absolute tolerance 1e-6 (0 when already satisfied at eps = 0).
double SmallestEpsForDelta(double l2_sensitivity, double sigma, double delta);

// Certified bound on the membership divergence for one target: the average
// over adjacent pairs (D containing target, D' with target swapped out) of
// the per-pair Gaussian divergences, evaluated from the enumerated double
// sum. Pairs with q(D) = q(D') contribute 0. Requires parent.n() <= 8.
double PmpDeltaBoundGeneral(const ParentSet& parent, int target,
                            const SumQuery& query, double sigma, double eps);

// The same bound reduced to a single average over the 2n-1 candidate swap
// partners: for sum queries q(D) - q(D') = f(target) - f(x') and every x'
// appears equally often, so the double sum collapses to
// (1/(2n-1)) sum_{x' != target} [per-pair divergence at ||f(target)-f(x')||].
// O(n d) per target; no enumeration.
double PmpDeltaBoundFast(const ParentSet& parent, int target,
                         const SumQuery& query, double sigma, double eps);

// Smallest eps whose certified bound is <= delta for every target, by
// bisection to absolute tolerance 1e-6. The bound is verified non-increasing
// in eps at the bracket endpoints.
PrivacyParams GaussPmpEpsilon(const ParentSet& parent, const SumQuery& query,
                              double sigma, double delta);

// Smallest eps of the DP condition restricted to adjacent datasets inside
// the parent set, whose sensitivity is the largest pairwise ||f(x) - f(x')||.
PrivacyParams GaussSubpopDpEpsilon(const ParentSet& parent,
                                   const SumQuery& query, double sigma,
                                   double delta);

// Worst-case parameter for the mean query over the radius-clip ball, where
// the global sensitivity is 2*clip/n.
PrivacyParams GaussWorstCaseEpsilon(double clip, int n, double sigma,
                                    double delta);

// Quadrature reference for 1-d instances: numerically integrates the exact
// hockey-stick divergence (both orders, max taken) between the equal-weight
// Gaussian mixtures over the in/out half-subsets, on a grid spanning 12 sigma
// beyond all component means with trapezoidal weights; absolute error below
// 1e-7 for the step sigma/4096 used here. Throws std::invalid_argument for
// queries with output dimension != 1.
double MixtureDivergenceOracle1D(const ParentSet& parent, int target,
                                 const SumQuery& query, double sigma,
                                 double eps);

}  // namespace pmpaudit

#endif  // PMPAUDIT_GAUSSMECH_H_
