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

#include "pmpaudit/synthdata.h"

#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace pmpaudit {

namespace {

double RowNorm(const double* row, int d) {
  double s = 0.0;
  for (int c = 0; c < d; ++c) s += row[c] * row[c];
  return std::sqrt(s);
}

}  // namespace

void ValidateGenSpec(const GenSpec& spec) {
  if (spec.n <= 0 || spec.d <= 0) {
    throw std::invalid_argument("GenSpec: n and d must be positive");
  }
  if (!(spec.sigma_data > 0.0) || !(spec.clip > 0.0)) {
    throw std::invalid_argument("GenSpec: sigma_data and clip must be positive");
  }
  if (spec.outlier_count < 0 || spec.outlier_count > 2 * spec.n) {
    throw std::invalid_argument("GenSpec: outlier_count must be in [0, 2n]");
  }
  if (!(spec.outlier_factor >= 1.0)) {
    throw std::invalid_argument("GenSpec: outlier_factor must be >= 1");
  }
  if (spec.center == CenterKind::kCandidateOne && spec.m < 2) {
    throw std::invalid_argument(
        "GenSpec: center = candidate_1 requires a candidate set (m >= 2)");
  }
}

CandidateSet GenCandidates(const GenSpec& spec, SplitMix64& rng) {
  if (spec.m < 2) {
    throw std::invalid_argument("GenCandidates: need m >= 2");
  }
  std::vector<double> data(static_cast<std::size_t>(spec.m) * spec.d);
  for (int j = 0; j < spec.m; ++j) {
    double* row = data.data() + static_cast<std::size_t>(j) * spec.d;
    double norm = 0.0;
    do {
      for (int c = 0; c < spec.d; ++c) row[c] = rng.NextGaussian();
      norm = RowNorm(row, spec.d);
    } while (norm == 0.0);
    for (int c = 0; c < spec.d; ++c) row[c] /= norm;
  }
  return CandidateSet(std::move(data), spec.m, spec.d);
}

void InjectOutliers(std::vector<double>& points, int rows, int d, int k,
                    double factor, SplitMix64& rng) {
  if (k < 0 || k > rows) {
    throw std::invalid_argument("InjectOutliers: k must be in [0, rows]");
  }
  if (k == 0) return;
  // Partial Fisher-Yates over the row indices; the first k entries are a
  // uniform k-subset.
  std::vector<int> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < k; ++j) {
    const int pick =
        j + static_cast<int>(rng.NextUnit() * static_cast<double>(rows - j));
    std::swap(idx[j], idx[pick]);
  }
  for (int j = 0; j < k; ++j) {
    double* row = points.data() + static_cast<std::size_t>(idx[j]) * d;
    for (int c = 0; c < d; ++c) row[c] *= factor;
  }
}

void ClipRows(std::vector<double>& points, int rows, int d, double clip) {
  if (!(clip > 0.0)) {
    throw std::invalid_argument("ClipRows: clip must be positive");
  }
  for (int i = 0; i < rows; ++i) {
    double* row = points.data() + static_cast<std::size_t>(i) * d;
    const double norm = RowNorm(row, d);
    if (norm > clip) {
      const double scale = clip / norm;
      for (int c = 0; c < d; ++c) row[c] *= scale;
    }
  }
}

ParentSet GenParent(const GenSpec& spec, const CandidateSet* cands,
                    SplitMix64& rng) {
  ValidateGenSpec(spec);
  std::vector<double> center(spec.d, 0.0);
  if (spec.center == CenterKind::kCandidateOne) {
    if (cands == nullptr || cands->m() < 1 || cands->d() != spec.d) {
      throw std::invalid_argument("GenParent: center = candidate_1 needs candidates");
    }
    const auto w1 = cands->point(0);
    center.assign(w1.begin(), w1.end());
  }

  const int rows = 2 * spec.n;
  std::vector<double> data(static_cast<std::size_t>(rows) * spec.d);
  for (int i = 0; i < rows; ++i) {
    double* row = data.data() + static_cast<std::size_t>(i) * spec.d;
    for (int c = 0; c < spec.d; ++c) {
      row[c] = center[c] + spec.sigma_data * rng.NextGaussian();
    }
  }
  InjectOutliers(data, rows, spec.d, spec.outlier_count, spec.outlier_factor,
                 rng);
  ClipRows(data, rows, spec.d, spec.clip);

  // Duplicates can survive clipping (e.g. two 1-d points clipped onto the
  // same boundary); nudge later occurrences apart deterministically.
  const std::size_t row_bytes = sizeof(double) * spec.d;
  for (int pass = 0; pass < 4; ++pass) {
    bool collided = false;
    for (int i = 0; i < rows; ++i) {
      for (int j = i + 1; j < rows; ++j) {
        if (std::memcmp(data.data() + std::size_t(i) * spec.d,
                        data.data() + std::size_t(j) * spec.d, row_bytes) == 0) {
          data[std::size_t(j) * spec.d] += 1e-12 * j;
          collided = true;
        }
      }
    }
    if (!collided) break;
    if (pass == 3) {
      throw std::runtime_error("GenParent: could not separate duplicate points");
    }
  }
  return ParentSet(std::move(data), spec.n, spec.d);
}

Instance MakeInstance(const GenSpec& spec) {
  ValidateGenSpec(spec);
  SplitMix64 rng(spec.seed);
  if (spec.m >= 2) {
    CandidateSet cands = GenCandidates(spec, rng);
    ParentSet parent = GenParent(spec, &cands, rng);
    return Instance{std::move(cands), std::move(parent)};
  }
  return Instance{std::nullopt, GenParent(spec, nullptr, rng)};
}

Instance MakeTrialInstance(const GenSpec& spec, std::uint64_t trial_index) {
  ValidateGenSpec(spec);
  SplitMix64 rng = DeriveTrialStream(spec.seed, trial_index);
  if (spec.m >= 2) {
    CandidateSet cands = GenCandidates(spec, rng);
    ParentSet parent = GenParent(spec, &cands, rng);
    return Instance{std::move(cands), std::move(parent)};
  }
  return Instance{std::nullopt, GenParent(spec, nullptr, rng)};
}

}  // namespace pmpaudit
