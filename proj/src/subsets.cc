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

#include "pmpaudit/subsets.h"

#include <stdexcept>
#include <string>

namespace pmpaudit {

std::vector<std::uint32_t> EnumerateMasks(int num_points, int k) {
  if (k <= 0 || num_points < k || num_points > 16) {
    throw std::invalid_argument("EnumerateMasks: need 0 < k <= num_points <= 16");
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(Binomial(num_points, k));
  const std::uint32_t limit = 1u << num_points;
  std::uint32_t mask = (1u << k) - 1u;
  while (mask < limit) {
    masks.push_back(mask);
    // Gosper's hack: next mask with the same popcount.
    const std::uint32_t c = mask & (0u - mask);
    const std::uint32_t r = mask + c;
    if (r >= limit) break;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return masks;
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
  }
  return result;
}

std::pair<std::vector<SubsetSelector>, std::vector<SubsetSelector>>
SplitInOut(const ParentSet& parent, int target) {
  if (target < 0 || target >= parent.size()) {
    throw std::out_of_range("SplitInOut: target index " +
                            std::to_string(target) + " out of range");
  }
  std::vector<SubsetSelector> in_sets;
  std::vector<SubsetSelector> out_sets;
  for (std::uint32_t mask : EnumerateMasks(parent.size(), parent.n())) {
    if ((mask >> target) & 1u) {
      in_sets.push_back({mask});
    } else {
      out_sets.push_back({mask});
    }
  }
  return {std::move(in_sets), std::move(out_sets)};
}

std::vector<SubsetSelector> AdjacentOutNeighbors(SubsetSelector d,
                                                 const ParentSet& parent,
                                                 int target) {
  ValidateSelector(d, parent);
  if (target < 0 || target >= parent.size()) {
    throw std::out_of_range("AdjacentOutNeighbors: target out of range");
  }
  if (!d.Contains(target)) {
    throw std::invalid_argument(
        "AdjacentOutNeighbors: selector must contain the target");
  }
  std::vector<SubsetSelector> neighbors;
  neighbors.reserve(parent.n());
  const std::uint32_t without_target = d.bits & ~(1u << target);
  for (int y = 0; y < parent.size(); ++y) {
    if (!d.Contains(y)) {
      neighbors.push_back({without_target | (1u << y)});
    }
  }
  return neighbors;
}

}  // namespace pmpaudit
