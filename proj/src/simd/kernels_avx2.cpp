// Compiled with -mavx2 only (no FMA) so every lane performs the same
// multiply-then-add rounding as the scalar reference.

#include "kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace l1dual::simd::detail {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, p);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[2]) + (lane[1] + lane[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_abs_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[2]) + (lane[1] + lane[3]);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double m = 0.0;
  for (double v : lane) m = v > m ? v : m;
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void soft_threshold_avx2(const double* w, double t, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d vnt = _mm256_set1_pd(-t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(w + i);
    const __m256d above = _mm256_cmp_pd(v, vt, _CMP_GT_OQ);
    const __m256d below = _mm256_cmp_pd(v, vnt, _CMP_LT_OQ);
    __m256d r = _mm256_setzero_pd();
    r = _mm256_blendv_pd(r, _mm256_add_pd(v, vt), below);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(v, vt), above);
    _mm256_storeu_pd(out + i, r);
  }
  soft_threshold_scalar(w + i, t, out + i, n - i);
}

void clamp_toward_avx2(const double* w, const double* y, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(w + i);
    const __m256d yy = _mm256_loadu_pd(y + i);
    const __m256d above = _mm256_cmp_pd(v, _mm256_add_pd(yy, vs), _CMP_GT_OQ);
    const __m256d below = _mm256_cmp_pd(v, _mm256_sub_pd(yy, vs), _CMP_LT_OQ);
    __m256d r = yy;
    r = _mm256_blendv_pd(r, _mm256_add_pd(v, vs), below);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(v, vs), above);
    _mm256_storeu_pd(out + i, r);
  }
  clamp_toward_scalar(w + i, y + i, s, out + i, n - i);
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{"avx2", dot_avx2, axpy_avx2, sum_abs_avx2, max_abs_avx2,
                                 soft_threshold_avx2, clamp_toward_avx2};
  return table;
}

}  // namespace l1dual::simd::detail
