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

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pmpaudit/kernels.h"

namespace pmpaudit::kern::avx2 {

bool Supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

inline double HorizontalMax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m2 = _mm_max_pd(lo, hi);
  const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
  return _mm_cvtsd_f64(m1);
}

// Vectorized exp for four doubles.
//
// Cody-Waite range reduction x = n*ln2 + r with |r| <= ln2/2, a degree-12
// Taylor polynomial for exp(r) (remainder ~1.7e-16 relative on the reduced
// interval), and reconstruction by 2^n applied as two half-power scalings so
// that subnormal results and the full exponent range are handled without
// branching. Arguments below the underflow threshold map to 0, above the
// overflow threshold to +inf; NaN propagates.
inline __m256d Exp4(__m256d x) {
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d kMinArg = _mm256_set1_pd(-745.2);
  const __m256d kMaxArg = _mm256_set1_pd(709.782712893384);

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, kLog2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, kLn2Hi, x);
  r = _mm256_fnmadd_pd(n, kLn2Lo, r);

  // Taylor coefficients 1/k! for k = 12 down to 0, evaluated by Horner/FMA.
  __m256d p = _mm256_set1_pd(2.08767569878680989792e-09);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.50521083854417187751e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858906526e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858925110e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873015873e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.98412698412698412698e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.38888888888888888889e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.33333333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.16666666666666666667e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.66666666666666666667e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n = 2^n1 * 2^n2 with n1 = floor(n/2), n2 = n - n1. Each half power has
  // an exponent comfortably inside the normal range.
  const __m256d n1 = _mm256_round_pd(
      _mm256_mul_pd(n, _mm256_set1_pd(0.5)),
      _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
  const __m256d n2 = _mm256_sub_pd(n, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n1));
  const __m256i e2 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n2));
  const __m256d s1 =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(e1, bias), 52));
  const __m256d s2 =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(e2, bias), 52));

  __m256d out = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);

  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(HUGE_VAL);
  out = _mm256_blendv_pd(out, zero, _mm256_cmp_pd(x, kMinArg, _CMP_LT_OQ));
  out = _mm256_blendv_pd(out, inf, _mm256_cmp_pd(x, kMaxArg, _CMP_GT_OQ));
  return out;
}

}  // namespace

double Sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += v[i];
  return s;
}

double Max(const double* v, std::size_t n) {
  std::size_t i = 0;
  double m = v[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(v);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
    m = HorizontalMax(acc);
  }
  for (; i < n; ++i) m = std::max(m, v[i]);
  return m;
}

double ExpSumShifted(const double* v, std::size_t n, double shift) {
  const __m256d sh = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = Exp4(_mm256_sub_pd(_mm256_loadu_pd(v + i), sh));
    acc = _mm256_add_pd(acc, e);
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += std::exp(v[i] - shift);
  return s;
}

void RowMax(double* acc, const double* row, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m =
        _mm256_max_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(row + i));
    _mm256_storeu_pd(acc + i, m);
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], row[i]);
}

void AccumExpShifted(double* acc, const double* row, const double* shift,
                     std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e =
        Exp4(_mm256_sub_pd(_mm256_loadu_pd(row + i), _mm256_loadu_pd(shift + i)));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), e));
  }
  for (; i < n; ++i) acc[i] += std::exp(row[i] - shift[i]);
}

double HockeyStickSum(const double* p, const double* q, std::size_t n,
                      double ratio) {
  const __m256d a = _mm256_set1_pd(ratio);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_fnmadd_pd(a, _mm256_loadu_pd(q + i), _mm256_loadu_pd(p + i));
    acc = _mm256_add_pd(acc, _mm256_max_pd(d, zero));
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += std::max(0.0, p[i] - ratio * q[i]);
  return s;
}

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void AccumGaussian(double* acc, const double* t, std::size_t n, double mean,
                   double inv_two_var, double weight) {
  const __m256d mu = _mm256_set1_pd(mean);
  const __m256d neg_itv = _mm256_set1_pd(-inv_two_var);
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(t + i), mu);
    const __m256d e = Exp4(_mm256_mul_pd(_mm256_mul_pd(d, d), neg_itv));
    _mm256_storeu_pd(acc + i,
                     _mm256_fmadd_pd(w, e, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) {
    const double d = t[i] - mean;
    acc[i] += weight * std::exp(-d * d * inv_two_var);
  }
}

double MaxAbsDiff(const double* a, const double* b, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double m = HorizontalMax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace pmpaudit::kern::avx2
