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

#include "pmpaudit/kernels.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace pmpaudit::kern {

namespace scalar {

double Sum(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i];
  return s;
}

double Max(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, v[i]);
  return m;
}

double ExpSumShifted(const double* v, std::size_t n, double shift) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - shift);
  return s;
}

void RowMax(double* acc, const double* row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], row[i]);
}

void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += std::exp(row[i] - shift[i]);
}

double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::max(0.0, p[i] - ratio * q[i]);
  return s;
}

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = t[i] - mean;
    acc[i] += weight * std::exp(-d * d * inv_two_var);
  }
}

double MaxAbsDiff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace scalar

namespace {

struct Ops {
  Isa isa;
  double (*sum)(const double*, std::size_t);
  double (*max)(const double*, std::size_t);
  double (*exp_sum_shifted)(const double*, std::size_t, double);
  void (*row_max)(double*, const double*, std::size_t);
  void (*accum_exp_shifted)(double*, const double*, const double*,
                            std::size_t);
  double (*hockey_stick_sum)(const double*, const double*, std::size_t,
                             double);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*accum_gaussian)(double*, const double*, std::size_t, double, double,
                         double);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
};

constexpr Ops kScalarOps = {
    Isa::kScalar,
    scalar::Sum,
    scalar::Max,
    scalar::ExpSumShifted,
    scalar::RowMax,
    scalar::AccumExpShifted,
    scalar::HockeyStickSum,
    scalar::SquaredDistance,
    scalar::AccumGaussian,
    scalar::MaxAbsDiff,
};

#ifdef PMPAUDIT_HAVE_AVX2
constexpr Ops kAvx2Ops = {
    Isa::kAvx2,
    avx2::Sum,
    avx2::Max,
    avx2::ExpSumShifted,
    avx2::RowMax,
    avx2::AccumExpShifted,
    avx2::HockeyStickSum,
    avx2::SquaredDistance,
    avx2::AccumGaussian,
    avx2::MaxAbsDiff,
};
#endif

const Ops& Select() {
  static const Ops& ops = [mode = std::getenv("PMP_AUDIT_SIMD")]() -> const
      Ops& {
    const bool force_scalar = mode != nullptr && std::strcmp(mode, "scalar") == 0;
#ifdef PMPAUDIT_HAVE_AVX2
    const bool force_avx2 = mode != nullptr && std::strcmp(mode, "avx2") == 0;
    if (!force_scalar && (force_avx2 || avx2::Supported())) return kAvx2Ops;
#endif
    (void)force_scalar;
    return kScalarOps;
  }();
  return ops;
}

}  // namespace

Isa ActiveIsa() { return Select().isa; }

double Sum(const double* v, std::size_t n) { return Select().sum(v, n); }
double Max(const double* v, std::size_t n) { return Select().max(v, n); }
double ExpSumShifted(const double* v, std::size_t n, double shift) {
  return Select().exp_sum_shifted(v, n, shift);
}
void RowMax(double* acc, const double* row, std::size_t n) {
  Select().row_max(acc, row, n);
}
void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n) {
  Select().accum_exp_shifted(acc, row, shift, n);
}
double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio) {
  return Select().hockey_stick_sum(p, q, n, ratio);
}
double SquaredDistance(const double* a, const double* b, std::size_t n) {
  return Select().squared_distance(a, b, n);
}
void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight) {
  Select().accum_gaussian(acc, t, n, mean, inv_two_var, weight);
}
double MaxAbsDiff(const double* a, const double* b, std::size_t n) {
  return Select().max_abs_diff(a, b, n);
}

}  // namespace pmpaudit::kern
