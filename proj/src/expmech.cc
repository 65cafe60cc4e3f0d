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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pmpaudit/kernels.h"
#include "pmpaudit/subsets.h"

namespace pmpaudit {

namespace {

constexpr double kUnitNormTolerance = 1e-12;
constexpr double kCalibrationRelTolerance = 1e-6;
constexpr double kBracketLimit = 1152921504606846976.0;  // 2^60

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> SoftmaxLogMasses(std::span<const double> losses,
                                     double scale) {
  std::vector<double> lw(losses.size());
  for (std::size_t j = 0; j < losses.size(); ++j) lw[j] = -scale * losses[j];
  const double mx = kern::Max(lw.data(), lw.size());
  const double log_z = mx + std::log(kern::ExpSumShifted(lw.data(), lw.size(), mx));
  for (double& v : lw) v -= log_z;
  return lw;
}

}  // namespace

CandidateSet::CandidateSet(std::vector<double> data, int m, int d)
    : data_(std::move(data)), m_(m), d_(d) {
  if (m_ < 2 || d_ <= 0) {
    throw std::invalid_argument("CandidateSet: need m >= 2 and d >= 1");
  }
  if (data_.size() != static_cast<std::size_t>(m_) * d_) {
    throw std::invalid_argument("CandidateSet: expected m*d coordinates");
  }
  for (int j = 0; j < m_; ++j) {
    const double norm = Norm(point(j));
    if (std::fabs(norm - 1.0) > kUnitNormTolerance) {
      throw std::invalid_argument("CandidateSet: candidate " +
                                  std::to_string(j) + " is not unit-norm");
    }
  }
}

void ValidateConfig(const ExpMechConfig& cfg) {
  if (!(cfg.eps_dp > 0.0) || !std::isfinite(cfg.eps_dp)) {
    throw std::invalid_argument("ExpMechConfig: eps_dp must be positive");
  }
  if (!(cfg.sensitivity > 0.0) || !std::isfinite(cfg.sensitivity)) {
    throw std::invalid_argument("ExpMechConfig: sensitivity must be positive");
  }
  if (!(cfg.clip > 0.0)) {
    throw std::invalid_argument("ExpMechConfig: clip must be positive");
  }
}

double GeomedianLoss(std::span<const double> w,
                     const std::vector<std::vector<double>>& points) {
  if (points.empty()) {
    throw std::invalid_argument("GeomedianLoss: empty dataset");
  }
  double total = 0.0;
  for (const auto& x : points) {
    if (x.size() != w.size()) {
      throw std::invalid_argument("GeomedianLoss: dimension mismatch");
    }
    total += std::sqrt(kern::SquaredDistance(w.data(), x.data(), w.size()));
  }
  return total / static_cast<double>(points.size());
}

double GeomedianLoss(std::span<const double> w, const ParentSet& parent,
                     SubsetSelector d) {
  ValidateSelector(d, parent);
  if (static_cast<int>(w.size()) != parent.d()) {
    throw std::invalid_argument("GeomedianLoss: dimension mismatch");
  }
  double total = 0.0;
  for (int i : d.Indices()) {
    total += std::sqrt(
        kern::SquaredDistance(w.data(), parent.point(i).data(), w.size()));
  }
  return total / parent.n();
}

double LossSensitivityForNorm(double w_norm, double clip, int n) {
  if (!(clip > 0.0) || n < 1 || !(w_norm >= 0.0)) {
    throw std::invalid_argument("LossSensitivityForNorm: bad arguments");
  }
  // ||w - x|| over the ball ranges [max(0, ||w|| - C), ||w|| + C].
  return ((w_norm + clip) - std::max(0.0, w_norm - clip)) / n;
}

double LossSensitivity(double clip, const CandidateSet& cands, int n) {
  double best = 0.0;
  for (int j = 0; j < cands.m(); ++j) {
    best = std::max(best, LossSensitivityForNorm(Norm(cands.point(j)), clip, n));
  }
  return best;
}

DiscretePMF ExpMechPmf(const std::vector<std::vector<double>>& dataset,
                       const CandidateSet& cands, const ExpMechConfig& cfg) {
  ValidateConfig(cfg);
  std::vector<double> losses(cands.m());
  for (int j = 0; j < cands.m(); ++j) {
    losses[j] = GeomedianLoss(cands.point(j), dataset);
    if (!std::isfinite(losses[j])) {
      throw std::domain_error("ExpMechPmf: non-finite loss");
    }
  }
  const auto lm = SoftmaxLogMasses(losses, cfg.eps_dp / (2.0 * cfg.sensitivity));
  std::vector<double> mass(lm.size());
  for (std::size_t j = 0; j < lm.size(); ++j) mass[j] = std::exp(lm[j]);
  const double total = kern::Sum(mass.data(), mass.size());
  for (double& v : mass) v /= total;
  return DiscretePMF(std::move(mass));
}

DiscretePMF ExpMechPmf(const ParentSet& parent, SubsetSelector d,
                       const CandidateSet& cands, const ExpMechConfig& cfg) {
  ValidateSelector(d, parent);
  std::vector<std::vector<double>> points;
  points.reserve(parent.n());
  for (int i : d.Indices()) {
    const auto p = parent.point(i);
    points.emplace_back(p.begin(), p.end());
  }
  return ExpMechPmf(points, cands, cfg);
}

ExpMechAnalysis::ExpMechAnalysis(const ParentSet& parent,
                                 const CandidateSet& cands)
    : n_(parent.n()), two_n_(parent.size()), m_(cands.m()) {
  if (parent.d() != cands.d()) {
    throw std::invalid_argument("ExpMechAnalysis: dimension mismatch");
  }
  if (n_ > 8) {
    throw std::invalid_argument(
        "ExpMechAnalysis: subset enumeration supported up to n = 8");
  }
  masks_ = EnumerateMasks(two_n_, n_);
  rank_.assign(std::size_t{1} << two_n_, -1);
  for (std::size_t si = 0; si < masks_.size(); ++si) {
    rank_[masks_[si]] = static_cast<int>(si);
  }

  // Candidate-to-point distances, point-major so the subset accumulation
  // below runs over contiguous rows of length m.
  std::vector<double> dist(static_cast<std::size_t>(two_n_) * m_);
  for (int i = 0; i < two_n_; ++i) {
    for (int j = 0; j < m_; ++j) {
      dist[static_cast<std::size_t>(i) * m_ + j] = std::sqrt(kern::SquaredDistance(
          parent.point(i).data(), cands.point(j).data(), parent.d()));
    }
  }
  losses_.assign(masks_.size() * m_, 0.0);
  for (std::size_t si = 0; si < masks_.size(); ++si) {
    double* row = losses_.data() + si * m_;
    for (int i = 0; i < two_n_; ++i) {
      if (!((masks_[si] >> i) & 1u)) continue;
      const double* drow = dist.data() + static_cast<std::size_t>(i) * m_;
      for (int j = 0; j < m_; ++j) row[j] += drow[j];
    }
    for (int j = 0; j < m_; ++j) row[j] /= n_;
  }
}

void ExpMechAnalysis::FillLogMasses(double scale,
                                    std::vector<double>& lm) const {
  lm.resize(losses_.size());
  for (std::size_t si = 0; si < masks_.size(); ++si) {
    const double* lrow = losses_.data() + si * m_;
    double* out = lm.data() + si * m_;
    for (int j = 0; j < m_; ++j) out[j] = -scale * lrow[j];
    const double mx = kern::Max(out, m_);
    const double log_z = mx + std::log(kern::ExpSumShifted(out, m_, mx));
    for (int j = 0; j < m_; ++j) out[j] -= log_z;
  }
}

double ExpMechAnalysis::PmpEpsilon(double eps_dp, double sensitivity) const {
  std::vector<double> lm;
  FillLogMasses(eps_dp / (2.0 * sensitivity), lm);

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> max_in(m_), max_out(m_), sum_in(m_), sum_out(m_);
  double eps = 0.0;
  for (int target = 0; target < two_n_; ++target) {
    std::fill(max_in.begin(), max_in.end(), neg_inf);
    std::fill(max_out.begin(), max_out.end(), neg_inf);
    for (std::size_t si = 0; si < masks_.size(); ++si) {
      const double* row = lm.data() + si * m_;
      if ((masks_[si] >> target) & 1u) {
        kern::RowMax(max_in.data(), row, m_);
      } else {
        kern::RowMax(max_out.data(), row, m_);
      }
    }
    std::fill(sum_in.begin(), sum_in.end(), 0.0);
    std::fill(sum_out.begin(), sum_out.end(), 0.0);
    for (std::size_t si = 0; si < masks_.size(); ++si) {
      const double* row = lm.data() + si * m_;
      if ((masks_[si] >> target) & 1u) {
        kern::AccumExpShifted(sum_in.data(), row, max_in.data(), m_);
      } else {
        kern::AccumExpShifted(sum_out.data(), row, max_out.data(), m_);
      }
    }
    for (int j = 0; j < m_; ++j) {
      const double lse_in = max_in[j] + std::log(sum_in[j]);
      const double lse_out = max_out[j] + std::log(sum_out[j]);
      eps = std::max(eps, std::fabs(lse_in - lse_out));
    }
  }
  return eps;
}

double ExpMechAnalysis::SubpopDpEpsilon(double eps_dp,
                                        double sensitivity) const {
  std::vector<double> lm;
  FillLogMasses(eps_dp / (2.0 * sensitivity), lm);

  double eps = 0.0;
  for (std::size_t si = 0; si < masks_.size(); ++si) {
    const std::uint32_t mask = masks_[si];
    const double* row = lm.data() + si * m_;
    for (int i = 0; i < two_n_; ++i) {
      if (!((mask >> i) & 1u)) continue;
      for (int y = i + 1; y < two_n_; ++y) {
        if ((mask >> y) & 1u) continue;
        const int other = rank_[mask ^ (1u << i) ^ (1u << y)];
        eps = std::max(
            eps, kern::MaxAbsDiff(row, lm.data() + std::size_t(other) * m_, m_));
      }
    }
  }
  return eps;
}

PrivacyParams ExpMechPmp(const ParentSet& parent, const CandidateSet& cands,
                         const ExpMechConfig& cfg) {
  ValidateConfig(cfg);
  return {ExpMechAnalysis(parent, cands).PmpEpsilon(cfg.eps_dp, cfg.sensitivity),
          0.0};
}

PrivacyParams ExpMechSubpopDp(const ParentSet& parent,
                              const CandidateSet& cands,
                              const ExpMechConfig& cfg) {
  ValidateConfig(cfg);
  return {
      ExpMechAnalysis(parent, cands).SubpopDpEpsilon(cfg.eps_dp, cfg.sensitivity),
      0.0};
}

ExpMechConfig CalibrateExpMechToSubpopDp(const ParentSet& parent,
                                         const CandidateSet& cands,
                                         double clip, double target_eps_x) {
  if (!(target_eps_x > 0.0)) {
    throw std::invalid_argument("CalibrateExpMechToSubpopDp: target must be > 0");
  }
  const ExpMechAnalysis analysis(parent, cands);
  const double sensitivity = LossSensitivity(clip, cands, parent.n());
  const auto eps_x = [&](double eps) {
    return analysis.SubpopDpEpsilon(eps, sensitivity);
  };

  double lo = 0.0;
  double lo_val = 0.0;
  double hi = 1.0;
  double hi_val = eps_x(hi);
  while (hi_val < target_eps_x) {
    lo = hi;
    lo_val = hi_val;
    hi *= 2.0;
    if (hi > kBracketLimit) {
      throw CalibrationError(
          "CalibrateExpMechToSubpopDp: bracket expansion exceeded 2^60");
    }
    hi_val = eps_x(hi);
    if (hi_val < lo_val) {
      throw CalibrationError(
          "CalibrateExpMechToSubpopDp: eps(X) not monotone over the bracket");
    }
  }

  const double tol = kCalibrationRelTolerance * target_eps_x;
  double mid = hi;
  double mid_val = hi_val;
  for (int iter = 0; std::fabs(mid_val - target_eps_x) > tol; ++iter) {
    if (iter > 300) {
      throw CalibrationError("CalibrateExpMechToSubpopDp: bisection stalled");
    }
    mid = 0.5 * (lo + hi);
    mid_val = eps_x(mid);
    if (mid_val < lo_val - tol || mid_val > hi_val + tol) {
      throw CalibrationError(
          "CalibrateExpMechToSubpopDp: eps(X) not monotone over the bracket");
    }
    if (mid_val < target_eps_x) {
      lo = mid;
      lo_val = mid_val;
    } else {
      hi = mid;
      hi_val = mid_val;
    }
  }
  return ExpMechConfig{mid, sensitivity, clip};
}

}  // namespace pmpaudit
