#pragma once

// Hot inner loops shared by the simplex tableau, the double-description
// enumerator, A_* prefix scans and the proximity iteration. Every kernel has
// a scalar reference implementation; vector variants are picked once at
// startup from what the CPU reports. L1DUAL_KERNELS=scalar forces the
// reference path.

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace l1dual::simd {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum_abs)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  /// out = sign(w) * max(|w| - t, 0), evaluated branch-wise as w -/+ t.
  void (*soft_threshold)(const double* w, double t, double* out, std::size_t n);
  /// out = w - s above y + s, w + s below y - s, y in between.
  void (*clamp_toward)(const double* w, const double* y, double s, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;
/// The table selected for this process.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum_abs(std::span<const double> x) { return active().sum_abs(x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace l1dual::simd
