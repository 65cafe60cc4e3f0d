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

#ifndef PMPAUDIT_RNG_H_
#define PMPAUDIT_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pmpaudit {

// splitmix64: 64-bit state, fixed gamma 0x9E3779B97F4A7C15, and the standard
// shift-xor-multiply output mix. All synthetic data in this project is driven
// by this generator so that streams are bit-identical for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double NextUnit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller on consecutive uniforms u1, u2:
  // r = sqrt(-2 ln(1 - u1)), theta = 2 pi u2; returns r cos(theta) first and
  // caches r sin(theta) for the next call.
  double NextGaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = NextUnit();
    const double u2 = NextUnit();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Stream for one trial: one splitmix64 step applied to seed ^ trial_index, so
// trials can run concurrently without sharing generator state.
inline SplitMix64 DeriveTrialStream(std::uint64_t seed,
                                    std::uint64_t trial_index) {
  return SplitMix64(SplitMix64(seed ^ trial_index).Next());
}

}  // namespace pmpaudit

#endif  // PMPAUDIT_RNG_H_
