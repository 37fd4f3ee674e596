#pragma once

#include "l1dual/simd.hpp"

namespace l1dual::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double sum_abs_scalar(const double* x, std::size_t n);
double max_abs_scalar(const double* x, std::size_t n);
void soft_threshold_scalar(const double* w, double t, double* out, std::size_t n);
void clamp_toward_scalar(const double* w, const double* y, double s, double* out, std::size_t n);

#ifdef L1DUAL_HAVE_AVX2
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace l1dual::simd::detail
