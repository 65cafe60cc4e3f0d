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

#ifndef PMPAUDIT_KERNELS_H_
#define PMPAUDIT_KERNELS_H_

#include <cstddef>
#include <span>

// Data-parallel arithmetic kernels used by the hot loops of the library:
// subset-weight softmax sums, hockey-stick sums over probability vectors,
// pairwise distances, and Gaussian-mixture accumulation on quadrature grids.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is selected once at startup from cpuid; the choice can
// be forced with the environment variable PMP_AUDIT_SIMD=scalar|avx2|auto.
// Both variants of a kernel are equivalence-tested against each other.

namespace pmpaudit::kern {

enum class Isa { kScalar, kAvx2 };

// The instruction set the dispatched entry points below resolve to.
Isa ActiveIsa();

// Sum of v[0..n).
double Sum(const double* v, std::size_t n);

// Maximum of v[0..n); n must be >= 1.
double Max(const double* v, std::size_t n);

// Sum of exp(v[i] - shift) over v[0..n).
double ExpSumShifted(const double* v, std::size_t n, double shift);

// acc[i] = max(acc[i], row[i]) for i in [0, n).
void RowMax(double* acc, const double* row, std::size_t n);

// acc[i] += exp(row[i] - shift[i]) for i in [0, n).
void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n);

// Sum of max(0, p[i] - ratio * q[i]); with ratio = e^eps this is the
// unnormalized hockey-stick sum between two mass vectors.
double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio);

// Squared Euclidean distance between a[0..n) and b[0..n).
double SquaredDistance(const double* a, const double* b, std::size_t n);

// acc[i] += weight * exp(-(t[i] - mean)^2 * inv_two_var): one Gaussian
// component of a mixture density evaluated on a grid.
void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight);

// max over i of |a[i] - b[i]|; returns 0 for n == 0.
double MaxAbsDiff(const double* a, const double* b, std::size_t n);

inline double Sum(std::span<const double> v) { return Sum(v.data(), v.size()); }
inline double Max(std::span<const double> v) { return Max(v.data(), v.size()); }
inline double SquaredDistance(std::span<const double> a,
                              std::span<const double> b) {
  return SquaredDistance(a.data(), b.data(), a.size());
}

// Reference implementations; canonical left-to-right summation order.
namespace scalar {
double Sum(const double* v, std::size_t n);
double Max(const double* v, std::size_t n);
double ExpSumShifted(const double* v, std::size_t n, double shift);
void RowMax(double* acc, const double* row, std::size_t n);
void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n);
double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio);
double SquaredDistance(const double* a, const double* b, std::size_t n);
void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight);
double MaxAbsDiff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#ifdef PMPAUDIT_HAVE_AVX2
namespace avx2 {
// True when the running CPU supports AVX2+FMA.
bool Supported();

double Sum(const double* v, std::size_t n);
double Max(const double* v, std::size_t n);
double ExpSumShifted(const double* v, std::size_t n, double shift);
void RowMax(double* acc, const double* row, std::size_t n);
void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n);
double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio);
double SquaredDistance(const double* a, const double* b, std::size_t n);
void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight);
double MaxAbsDiff(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif  // PMPAUDIT_HAVE_AVX2

}  // namespace pmpaudit::kern

#endif  // PMPAUDIT_KERNELS_H_
