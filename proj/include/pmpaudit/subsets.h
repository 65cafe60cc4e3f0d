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

#ifndef PMPAUDIT_SUBSETS_H_
#define PMPAUDIT_SUBSETS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "pmpaudit/types.h"

namespace pmpaudit {

// All k-element subsets of {0, ..., num_points-1} as bitmasks in ascending
// numeric order (Gosper's hack). Requires 0 < k <= num_points <= 16; the
// enumeration-based analyses in this library are exponential in n and are
// supported up to n = 8 (parent sets of 16 points).
std::vector<std::uint32_t> EnumerateMasks(int num_points, int k);

// Binomial coefficient as uint64; inputs small enough not to overflow here.
std::uint64_t Binomial(int n, int k);

// Partitions the half-subsets of `parent` by membership of `target`: first
// all size-n subsets containing target, then all excluding it. Both lists
// have C(2n-1, n-1) = C(2n, n)/2 entries.
std::pair<std::vector<SubsetSelector>, std::vector<SubsetSelector>>
SplitInOut(const ParentSet& parent, int target);

// The n adjacent datasets obtained from D (which must contain target) by
// replacing target with one of the parent points outside D. Every returned
// selector excludes target.
std::vector<SubsetSelector> AdjacentOutNeighbors(SubsetSelector d,
                                                 const ParentSet& parent,
                                                 int target);

}  // namespace pmpaudit

#endif  // PMPAUDIT_SUBSETS_H_
