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

#ifndef PMPAUDIT_TYPES_H_
#define PMPAUDIT_TYPES_H_

#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmpaudit {

// Epsilon value encoding "not epsilon-DP for any finite epsilon".
inline constexpr double kInfiniteEps = std::numeric_limits<double>::infinity();

// A bracketing or bisection routine failed to invert its target.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An (eps, delta) pair, used for both DP and PMP statements.
struct PrivacyParams {
  double eps = 0.0;
  double delta = 0.0;
};

// The subpopulation of 2n distinct d-dimensional points known to the
// attacker; the private dataset is a uniformly random half of it.
class ParentSet {
 public:
  // `data` is row-major, 2n rows of d coordinates. Throws
  // std::invalid_argument on size mismatch, non-finite coordinates, or
  // exactly-equal duplicate points.
  ParentSet(std::vector<double> data, int n, int d);

  static ParentSet FromPoints(const std::vector<std::vector<double>>& points);

  int n() const { return n_; }
  int d() const { return d_; }
  int size() const { return 2 * n_; }

  std::span<const double> point(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * d_,
            static_cast<std::size_t>(d_)};
  }
  const std::vector<double>& data() const { return data_; }

 private:
  std::vector<double> data_;
  int n_;
  int d_;
};

// One candidate dataset D: a set of n indices into a ParentSet, stored as a
// bitmask over the 2n parent positions.
struct SubsetSelector {
  std::uint32_t bits = 0;

  int Count() const { return std::popcount(bits); }
  bool Contains(int i) const { return (bits >> i) & 1u; }
  std::vector<int> Indices() const;

  friend bool operator==(SubsetSelector a, SubsetSelector b) {
    return a.bits == b.bits;
  }
};

// Throws std::invalid_argument unless `s` selects exactly parent.n() indices
// inside [0, 2n).
void ValidateSelector(SubsetSelector s, const ParentSet& parent);

// A probability mass function over a finite outcome alphabet. Masses must be
// nonnegative and sum to 1 within 1e-12. Labels are optional display names,
// one per outcome when present.
class DiscretePMF {
 public:
  explicit DiscretePMF(std::vector<double> mass,
                       std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(mass_.size()); }
  double mass(int a) const { return mass_[a]; }
  std::span<const double> masses() const { return mass_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<double> mass_;
  std::vector<std::string> labels_;
};

// The two outcome laws a membership attacker must distinguish for one target:
// uniform averages of the per-dataset laws over the half-subsets containing
// (p_in) and excluding (p_out) the target point.
struct MixturePair {
  DiscretePMF p_in;
  DiscretePMF p_out;
  int target_index = 0;
};

// A randomized algorithm with finite output alphabet, presented by its exact
// output PMF on each candidate dataset.
using FiniteMechanism =
    std::function<DiscretePMF(const ParentSet&, SubsetSelector)>;

}  // namespace pmpaudit

#endif  // PMPAUDIT_TYPES_H_
