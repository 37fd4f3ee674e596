#include "kernels.hpp"

#include <cmath>

namespace l1dual::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  // Four interleaved partial sums, combined pairwise; the AVX2 variant keeps
  // one lane per partial sum, so both paths round identically.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs_scalar(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += std::fabs(x[i]);
    s1 += std::fabs(x[i + 1]);
    s2 += std::fabs(x[i + 2]);
    s3 += std::fabs(x[i + 3]);
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void soft_threshold_scalar(const double* w, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

void clamp_toward_scalar(const double* w, const double* y, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w[i];
    out[i] = v > y[i] + s ? v - s : (v < y[i] - s ? v + s : y[i]);
  }
}

}  // namespace l1dual::simd::detail
