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

#ifndef PMPAUDIT_EXPMECH_H_
#define PMPAUDIT_EXPMECH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pmpaudit/types.h"

// Exponential mechanism over a finite candidate set with the geometric-median
// loss l(w, D) = (1/n) sum_i ||w - D_i||_2: exact membership-privacy and
// subpopulation DP parameters, and calibration of the mechanism parameter to
// a target subpopulation DP level.

namespace pmpaudit {

// The finite output set W of the mechanism: m unit-norm vectors in R^d.
class CandidateSet {
 public:
  // Row-major m x d. Requires m >= 2 and unit l2 norms within 1e-12.
  CandidateSet(std::vector<double> data, int m, int d);

  int m() const { return m_; }
  int d() const { return d_; }
  std::span<const double> point(int j) const {
    return {data_.data() + static_cast<std::size_t>(j) * d_,
            static_cast<std::size_t>(d_)};
  }

 private:
  std::vector<double> data_;
  int m_;
  int d_;
};

struct ExpMechConfig {
  double eps_dp = 1.0;       // worst-case DP parameter of the mechanism
  double sensitivity = 1.0;  // loss sensitivity over adjacent datasets
  double clip = 1.0;         // l2 clip radius of the data domain
};

// Throws std::invalid_argument unless eps_dp, sensitivity and clip are
// positive and the softmax scale eps/(2*sensitivity) is finite.
void ValidateConfig(const ExpMechConfig& cfg);

// (1/n) sum_i ||w - points[i]||_2.
double GeomedianLoss(std::span<const double> w,
                     const std::vector<std::vector<double>>& points);
double GeomedianLoss(std::span<const double> w, const ParentSet& parent,
                     SubsetSelector d);

// Range of x -> ||w - x|| over the l2 ball of radius clip, divided by n: the
// exact per-swap sensitivity of the geometric-median loss for a candidate of
// the given norm.
double LossSensitivityForNorm(double w_norm, double clip, int n);

// Loss sensitivity maximized over the candidate set.
double LossSensitivity(double clip, const CandidateSet& cands, int n);

// Output law on one dataset: mass(w_j) proportional to
// exp(-eps * l(w_j, D) / (2 * sensitivity)), normalized in the log domain.
DiscretePMF ExpMechPmf(const std::vector<std::vector<double>>& dataset,
                       const CandidateSet& cands, const ExpMechConfig& cfg);
DiscretePMF ExpMechPmf(const ParentSet& parent, SubsetSelector d,
                       const CandidateSet& cands, const ExpMechConfig& cfg);

// Precomputes the per-subset losses once so that the privacy parameters can
// be evaluated for many mechanism epsilons (as the calibration loop does).
class ExpMechAnalysis {
 public:
  // Enumerates all half-subsets; requires parent.n() <= 8.
  ExpMechAnalysis(const ParentSet& parent, const CandidateSet& cands);

  // Exact membership-privacy parameter of the mechanism: the largest
  // |ln(sum_in / sum_out)| over targets x and candidates w of the normalized
  // subset-weight sums. Both ratio directions are covered by the absolute
  // value. Always finite for this mechanism.
  double PmpEpsilon(double eps_dp, double sensitivity) const;

  // Exact DP parameter restricted to adjacent dataset pairs inside the
  // parent set.
  double SubpopDpEpsilon(double eps_dp, double sensitivity) const;

  int num_subsets() const { return static_cast<int>(masks_.size()); }

 private:
  // Log-masses ln P(A(D_s) = w_j) for every subset s and candidate j,
  // row-major by subset (max-shifted before exponentiation; no weight
  // underflows to exact zero).
  void FillLogMasses(double scale, std::vector<double>& lm) const;

  int n_;
  int two_n_;
  int m_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> rank_;
  std::vector<double> losses_;  // num_subsets x m
};

PrivacyParams ExpMechPmp(const ParentSet& parent, const CandidateSet& cands,
                         const ExpMechConfig& cfg);
PrivacyParams ExpMechSubpopDp(const ParentSet& parent,
                              const CandidateSet& cands,
                              const ExpMechConfig& cfg);

// Finds the mechanism parameter whose subpopulation DP level matches
// target_eps_x within relative tolerance 1e-6, by geometric bracketing and
// bisection; monotonicity over the bracket is verified. Throws
// CalibrationError when no bracket below 2^60 exists (for example for a
// mechanism that cannot reach the target).
ExpMechConfig CalibrateExpMechToSubpopDp(const ParentSet& parent,
                                         const CandidateSet& cands,
                                         double clip, double target_eps_x);

}  // namespace pmpaudit

#endif  // PMPAUDIT_EXPMECH_H_
