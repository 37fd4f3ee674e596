#include <cmath>
#include <stdexcept>

#include "l1dual/lp.hpp"
#include "l1dual/simd.hpp"

namespace l1dual {

MinL1Result min_l1_solve(const DenseMatrix& A, const DenseVec& y, const LpOptions& opts) {
  if (A.rows() != y.size()) throw std::invalid_argument("min_l1_solve: A and y disagree in length");
  const std::size_t n = A.cols();
  // Variables (u, v), z = u - v, u, v >= 0.
  LinearProgram lp(2 * n);
  lp.set_all_bounds(0.0, kInf);
  lp.set_objective(std::vector<double>(2 * n, -1.0));
  std::vector<double> row(2 * n);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = A(i, j);
      row[n + j] = -A(i, j);
    }
    lp.add_eq(row, y[i]);
  }
  const LpResult res = solve_lp(lp, opts);
  MinL1Result out;
  out.status = res.status;
  if (res.status != LpStatus::Optimal) return out;
  out.z = DenseVec(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out.z[j] = res.argmax[j] - res.argmax[n + j];
  out.value = -res.value;
  return out;
}

MinL1Result min_l1_solve(const TruncatedMatrix& A, const DenseVec& y, const LpOptions& opts) {
  return min_l1_solve(A.data, y, opts);
}

L1FitResult l1_fit_lp(const DenseMatrix& A, const DenseVec& y, double rho, const LpOptions& opts) {
  if (A.rows() != y.size()) throw std::invalid_argument("l1_fit_lp: A and y disagree in length");
  if (!(rho > 0.0)) throw std::invalid_argument("l1_fit_lp: rho must be positive");
  const std::size_t m = A.rows(), n = A.cols();
  // Variables (z+, z-, e+, e-) >= 0 with A(z+ - z-) + e+ - e- = y.
  LinearProgram lp(2 * n + 2 * m);
  lp.set_all_bounds(0.0, kInf);
  std::vector<double> c(2 * n + 2 * m, -1.0);
  for (std::size_t j = 0; j < 2 * n; ++j) c[j] = -rho;
  lp.set_objective(c);
  std::vector<double> row(2 * n + 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = A(i, j);
      row[n + j] = -A(i, j);
    }
    row[2 * n + i] = 1.0;
    row[2 * n + m + i] = -1.0;
    lp.add_eq(row, y[i]);
  }
  const LpResult res = solve_lp(lp, opts);
  L1FitResult out;
  out.status = res.status;
  if (res.status != LpStatus::Optimal) return out;
  out.z = DenseVec(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out.z[j] = res.argmax[j] - res.argmax[n + j];
  const auto az = A.multiply(out.z.span());
  double fit = 0.0;
  for (std::size_t i = 0; i < m; ++i) fit += std::fabs(y[i] - az[i]);
  out.value = fit + rho * simd::sum_abs(out.z.span());
  return out;
}

}  // namespace l1dual
