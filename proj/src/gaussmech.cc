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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmpaudit/kernels.h"
#include "pmpaudit/subsets.h"

namespace pmpaudit {

namespace {

constexpr double kSigmaRelTolerance = 1e-9;
constexpr double kEpsAbsTolerance = 1e-6;
constexpr double kBracketLimit = 1152921504606846976.0;  // 2^60
constexpr double kOracleStepDivisor = 4096.0;
constexpr double kOracleTailSigmas = 12.0;

double ValidatedEps(double eps, const char* where) {
  if (!(eps >= 0.0)) {
    throw std::domain_error(std::string(where) + ": eps must be >= 0");
  }
  return eps;
}

std::vector<double> ApplyPerSample(const SumQuery& query,
                                   const ParentSet& parent, int* out_dim) {
  std::vector<double> values;
  int dim = -1;
  for (int i = 0; i < parent.size(); ++i) {
    std::vector<double> v = query.per_sample(parent.point(i));
    if (dim < 0) {
      dim = static_cast<int>(v.size());
    } else if (static_cast<int>(v.size()) != dim) {
      throw std::invalid_argument("SumQuery: inconsistent output dimension");
    }
    values.insert(values.end(), v.begin(), v.end());
  }
  *out_dim = dim;
  return values;
}

// Gaps ||f(target) - f(x')|| for all x' != target, ascending point index.
std::vector<double> TargetGaps(const std::vector<double>& fvals, int dim,
                               int size, int target) {
  std::vector<double> gaps;
  gaps.reserve(size - 1);
  const double* ft = fvals.data() + static_cast<std::size_t>(target) * dim;
  for (int i = 0; i < size; ++i) {
    if (i == target) continue;
    gaps.push_back(std::sqrt(kern::SquaredDistance(
        ft, fvals.data() + static_cast<std::size_t>(i) * dim, dim)));
  }
  return gaps;
}

}  // namespace

SumQuery MeanQuery(int n) {
  if (n <= 0) throw std::invalid_argument("MeanQuery: n must be positive");
  return SumQuery{
      [n](std::span<const double> x) {
        std::vector<double> out(x.begin(), x.end());
        for (double& v : out) v /= n;
        return out;
      },
      "mean"};
}

double StdNormalCdf(double t) {
  if (std::isnan(t)) {
    throw std::domain_error("StdNormalCdf: NaN input");
  }
  return 0.5 * std::erfc(-t * std::numbers::sqrt2 / 2.0);
}

double StdNormalLogCdf(double t) {
  if (std::isnan(t)) {
    throw std::domain_error("StdNormalLogCdf: NaN input");
  }
  if (t >= -8.0) {
    return std::log(StdNormalCdf(t));
  }
  if (t >= -37.0) {
    // erfc stays normal down to arguments around 26, i.e. t around -37.
    return std::log(0.5 * std::erfc(-t * std::numbers::sqrt2 / 2.0));
  }
  // Asymptotic expansion of Mills' ratio: Phi(-x) = phi(x)/x * (1 - 1/x^2 +
  // 3/x^4 - 15/x^6 + 105/x^8 - 945/x^10 + 10395/x^12 - ...). At x = 37 the
  // truncation error is below 1e-16 relative.
  const double x = -t;
  const double ix2 = 1.0 / (x * x);
  const double series =
      ix2 * (-1.0 +
             ix2 * (3.0 +
                    ix2 * (-15.0 +
                           ix2 * (105.0 + ix2 * (-945.0 + ix2 * 10395.0)))));
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(series);
}

double GaussMechDelta(double l2_sensitivity, double sigma, double eps) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("GaussMechDelta: sigma must be positive");
  }
  if (!(l2_sensitivity >= 0.0)) {
    throw std::domain_error("GaussMechDelta: sensitivity must be >= 0");
  }
  ValidatedEps(eps, "GaussMechDelta");
  if (l2_sensitivity == 0.0) return 0.0;

  const double a = l2_sensitivity / (2.0 * sigma);
  const double b = eps * sigma / l2_sensitivity;
  const double t1 = StdNormalCdf(a - b);
  const double x = -a - b;
  // For very negative arguments form e^eps * Phi(x) in the log domain; Phi
  // may underflow long before the product does.
  const double t2 = x < -8.0 ? std::exp(eps + StdNormalLogCdf(x))
                             : std::exp(eps) * StdNormalCdf(x);
  return std::clamp(t1 - t2, 0.0, 1.0);
}

double CalibrateGaussSigma(double l2_sensitivity, double eps, double delta) {
  if (!(l2_sensitivity > 0.0)) {
    throw std::domain_error("CalibrateGaussSigma: sensitivity must be > 0");
  }
  ValidatedEps(eps, "CalibrateGaussSigma");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("CalibrateGaussSigma: delta must be in (0, 1)");
  }
  const auto satisfied = [&](double sigma) {
    return GaussMechDelta(l2_sensitivity, sigma, eps) <= delta;
  };

  double lo;
  double hi = l2_sensitivity;
  if (satisfied(hi)) {
    lo = 0.5 * hi;
    while (satisfied(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < l2_sensitivity / kBracketLimit) {
        throw CalibrationError("CalibrateGaussSigma: no violating lower bracket");
      }
    }
  } else {
    lo = hi;
    while (!satisfied(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > l2_sensitivity * kBracketLimit) {
        throw CalibrationError("CalibrateGaussSigma: no satisfying upper bracket");
      }
    }
  }
  while (hi - lo > kSigmaRelTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double SmallestEpsForDelta(double l2_sensitivity, double sigma, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("SmallestEpsForDelta: delta must be in (0, 1)");
  }
  const auto satisfied = [&](double eps) {
    return GaussMechDelta(l2_sensitivity, sigma, eps) <= delta;
  };
  if (satisfied(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (!satisfied(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketLimit) {
      throw CalibrationError("SmallestEpsForDelta: no satisfying upper bracket");
    }
  }
  while (hi - lo > kEpsAbsTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double PmpDeltaBoundGeneral(const ParentSet& parent, int target,
                            const SumQuery& query, double sigma, double eps) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("PmpDeltaBoundGeneral: sigma must be positive");
  }
  ValidatedEps(eps, "PmpDeltaBoundGeneral");
  if (target < 0 || target >= parent.size()) {
    throw std::out_of_range("PmpDeltaBoundGeneral: target out of range");
  }
  int dim = 0;
  const std::vector<double> fvals = ApplyPerSample(query, parent, &dim);

  // q(D) computed as the honest per-subset sum; this is the reference route
  // the collapsed fast path is tested against.
  const auto [in_sets, out_sets] = SplitInOut(parent, target);
  std::vector<double> q(dim);
  const auto subset_q = [&](SubsetSelector s) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int i : s.Indices()) {
      const double* f = fvals.data() + static_cast<std::size_t>(i) * dim;
      for (int c = 0; c < dim; ++c) q[c] += f[c];
    }
  };

  double total = 0.0;
  std::vector<double> qd(dim);
  for (SubsetSelector d : in_sets) {
    subset_q(d);
    qd = q;
    for (SubsetSelector dn : AdjacentOutNeighbors(d, parent, target)) {
      subset_q(dn);
      const double gap =
          std::sqrt(kern::SquaredDistance(qd.data(), q.data(), dim));
      if (gap > 0.0) total += GaussMechDelta(gap, sigma, eps);
    }
  }
  return total / (static_cast<double>(parent.n()) * in_sets.size());
}

double PmpDeltaBoundFast(const ParentSet& parent, int target,
                         const SumQuery& query, double sigma, double eps) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("PmpDeltaBoundFast: sigma must be positive");
  }
  ValidatedEps(eps, "PmpDeltaBoundFast");
  if (target < 0 || target >= parent.size()) {
    throw std::out_of_range("PmpDeltaBoundFast: target out of range");
  }
  int dim = 0;
  const std::vector<double> fvals = ApplyPerSample(query, parent, &dim);
  const std::vector<double> gaps = TargetGaps(fvals, dim, parent.size(), target);
  double total = 0.0;
  for (double gap : gaps) {
    if (gap > 0.0) total += GaussMechDelta(gap, sigma, eps);
  }
  return total / static_cast<double>(parent.size() - 1);
}

PrivacyParams GaussPmpEpsilon(const ParentSet& parent, const SumQuery& query,
                              double sigma, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("GaussPmpEpsilon: delta must be in (0, 1)");
  }
  if (!(sigma > 0.0)) {
    throw std::domain_error("GaussPmpEpsilon: sigma must be positive");
  }
  int dim = 0;
  const std::vector<double> fvals = ApplyPerSample(query, parent, &dim);
  std::vector<std::vector<double>> per_target_gaps;
  per_target_gaps.reserve(parent.size());
  for (int target = 0; target < parent.size(); ++target) {
    per_target_gaps.push_back(TargetGaps(fvals, dim, parent.size(), target));
  }
  const auto bound = [&](double eps) {
    double worst = 0.0;
    for (const auto& gaps : per_target_gaps) {
      double total = 0.0;
      for (double gap : gaps) {
        if (gap > 0.0) total += GaussMechDelta(gap, sigma, eps);
      }
      worst = std::max(worst, total / static_cast<double>(parent.size() - 1));
    }
    return worst;
  };

  if (bound(0.0) <= delta) return {0.0, delta};
  double lo = 0.0;
  double hi = 1.0;
  while (bound(hi) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketLimit) {
      throw CalibrationError("GaussPmpEpsilon: no satisfying upper bracket");
    }
  }
  if (bound(lo) < bound(hi)) {
    throw CalibrationError("GaussPmpEpsilon: bound not non-increasing in eps");
  }
  while (hi - lo > kEpsAbsTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, delta};
}

PrivacyParams GaussSubpopDpEpsilon(const ParentSet& parent,
                                   const SumQuery& query, double sigma,
                                   double delta) {
  int dim = 0;
  const std::vector<double> fvals = ApplyPerSample(query, parent, &dim);
  // Adjacent datasets inside the parent set swap one sample, so the
  // restricted sensitivity is the largest pairwise ||f(x) - f(x')||.
  double delta_x = 0.0;
  for (int i = 0; i < parent.size(); ++i) {
    for (int j = i + 1; j < parent.size(); ++j) {
      delta_x = std::max(
          delta_x, kern::SquaredDistance(
                       fvals.data() + static_cast<std::size_t>(i) * dim,
                       fvals.data() + static_cast<std::size_t>(j) * dim, dim));
    }
  }
  delta_x = std::sqrt(delta_x);
  return {SmallestEpsForDelta(delta_x, sigma, delta), delta};
}

PrivacyParams GaussWorstCaseEpsilon(double clip, int n, double sigma,
                                    double delta) {
  if (!(clip > 0.0) || n <= 0) {
    throw std::domain_error("GaussWorstCaseEpsilon: need clip > 0 and n >= 1");
  }
  return {SmallestEpsForDelta(2.0 * clip / n, sigma, delta), delta};
}

double MixtureDivergenceOracle1D(const ParentSet& parent, int target,
                                 const SumQuery& query, double sigma,
                                 double eps) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("MixtureDivergenceOracle1D: sigma must be positive");
  }
  ValidatedEps(eps, "MixtureDivergenceOracle1D");
  int dim = 0;
  const std::vector<double> fvals = ApplyPerSample(query, parent, &dim);
  if (dim != 1) {
    throw std::invalid_argument(
        "MixtureDivergenceOracle1D: only 1-d queries are supported");
  }

  const auto [in_sets, out_sets] = SplitInOut(parent, target);
  const auto means_of = [&](const std::vector<SubsetSelector>& sets) {
    std::vector<double> means;
    means.reserve(sets.size());
    for (SubsetSelector s : sets) {
      double q = 0.0;
      for (int i : s.Indices()) q += fvals[i];
      means.push_back(q);
    }
    return means;
  };
  const std::vector<double> in_means = means_of(in_sets);
  const std::vector<double> out_means = means_of(out_sets);

  double lo = in_means.front();
  double hi = lo;
  for (double mu : in_means) {
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
  }
  for (double mu : out_means) {
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
  }
  lo -= kOracleTailSigmas * sigma;
  hi += kOracleTailSigmas * sigma;

  const double step = sigma / kOracleStepDivisor;
  const std::size_t npts = static_cast<std::size_t>((hi - lo) / step) + 2;
  if (npts > (std::size_t{1} << 27)) {
    throw std::invalid_argument(
        "MixtureDivergenceOracle1D: grid too large; component means are too "
        "spread out relative to sigma");
  }

  std::vector<double> grid(npts);
  for (std::size_t i = 0; i < npts; ++i) grid[i] = lo + step * i;
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));

  std::vector<double> p(npts, 0.0);
  std::vector<double> q(npts, 0.0);
  const double w_in = norm / static_cast<double>(in_means.size());
  const double w_out = norm / static_cast<double>(out_means.size());
  for (double mu : in_means) {
    kern::AccumGaussian(p.data(), grid.data(), npts, mu, inv_two_var, w_in);
  }
  for (double mu : out_means) {
    kern::AccumGaussian(q.data(), grid.data(), npts, mu, inv_two_var, w_out);
  }

  const double ratio = std::exp(eps);
  const auto trapezoid = [&](const double* a, const double* b) {
    const double interior = kern::HockeyStickSum(a, b, npts, ratio);
    const double first = std::max(0.0, a[0] - ratio * b[0]);
    const double last = std::max(0.0, a[npts - 1] - ratio * b[npts - 1]);
    return step * (interior - 0.5 * (first + last));
  };
  return std::max(trapezoid(p.data(), q.data()), trapezoid(q.data(), p.data()));
}

}  // namespace pmpaudit
