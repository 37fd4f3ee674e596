#include "l1dual/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "l1dual/core.hpp"
#include "l1dual/simd.hpp"

namespace l1dual {

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  std::vector<double> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = simd::dot(row(i), x);
  return y;
}

std::vector<double> DenseMatrix::multiply_transpose(std::span<const double> x) const {
  if (x.size() != rows_) throw std::invalid_argument("DenseMatrix::multiply_transpose: dimension mismatch");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (x[i] != 0.0) simd::axpy(x[i], row(i), y);
  }
  return y;
}

double spectral_norm(const DenseMatrix& m, int iterations) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  std::vector<double> v(m.cols(), 1.0 / std::sqrt(static_cast<double>(m.cols())));
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const auto mv = m.multiply(v);
    auto w = m.multiply_transpose(mv);
    const double nw = l2_norm(w);
    if (nw == 0.0) return 0.0;
    sigma = std::sqrt(nw);
    for (auto& x : w) x /= nw;
    v = std::move(w);
  }
  return std::max(sigma, l2_norm(m.multiply(v)));
}

}  // namespace l1dual
