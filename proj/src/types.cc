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

#include "pmpaudit/types.h"

#include <cmath>
#include <cstring>

namespace pmpaudit {

namespace {
constexpr double kMassSumTolerance = 1e-12;
}

ParentSet::ParentSet(std::vector<double> data, int n, int d)
    : data_(std::move(data)), n_(n), d_(d) {
  if (n_ <= 0 || d_ <= 0) {
    throw std::invalid_argument("ParentSet: n and d must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(2 * n_) * d_) {
    throw std::invalid_argument("ParentSet: expected 2n*d coordinates");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ParentSet: non-finite coordinate");
    }
  }
  // Distinctness under exact equality.
  for (int i = 0; i < 2 * n_; ++i) {
    for (int j = i + 1; j < 2 * n_; ++j) {
      if (std::memcmp(point(i).data(), point(j).data(),
                      sizeof(double) * d_) == 0) {
        throw std::invalid_argument("ParentSet: duplicate points " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j));
      }
    }
  }
}

ParentSet ParentSet::FromPoints(const std::vector<std::vector<double>>& points) {
  if (points.empty() || points.size() % 2 != 0) {
    throw std::invalid_argument("ParentSet: need a nonempty even point count");
  }
  const int d = static_cast<int>(points.front().size());
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != d) {
      throw std::invalid_argument("ParentSet: ragged point dimensions");
    }
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return ParentSet(std::move(flat), static_cast<int>(points.size()) / 2, d);
}

std::vector<int> SubsetSelector::Indices() const {
  std::vector<int> out;
  out.reserve(Count());
  for (int i = 0; i < 32; ++i) {
    if (Contains(i)) out.push_back(i);
  }
  return out;
}

void ValidateSelector(SubsetSelector s, const ParentSet& parent) {
  if (s.Count() != parent.n()) {
    throw std::invalid_argument("SubsetSelector: expected exactly n indices");
  }
  if (s.bits >> parent.size()) {
    throw std::invalid_argument("SubsetSelector: index out of range");
  }
}

DiscretePMF::DiscretePMF(std::vector<double> mass,
                         std::vector<std::string> labels)
    : mass_(std::move(mass)), labels_(std::move(labels)) {
  if (mass_.empty()) {
    throw std::invalid_argument("DiscretePMF: empty alphabet");
  }
  if (!labels_.empty() && labels_.size() != mass_.size()) {
    throw std::invalid_argument("DiscretePMF: label/mass size mismatch");
  }
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("DiscretePMF: masses must be finite and >= 0");
    }
    total += m;
  }
  if (std::fabs(total - 1.0) > kMassSumTolerance) {
    throw std::invalid_argument("DiscretePMF: masses sum to " +
                                std::to_string(total) + ", expected 1");
  }
}

}  // namespace pmpaudit
