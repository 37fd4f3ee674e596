#pragma once

#include <cstddef>

#include "l1dual/core.hpp"
#include "l1dual/matrix.hpp"
#include "l1dual/operators.hpp"

namespace l1dual {

/// Soft threshold: w_j - t above t, w_j + t below -t, 0 in between.
DenseVec prox_scaled_l1(const DenseVec& w, double t);

/// Proximity operator of s * ||y - .||_1: moves each w_j toward y_j by s,
/// stopping at y_j.
DenseVec prox_residual_l1(const DenseVec& w, const DenseVec& y, double s);

struct FppaParams {
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t max_iter = 200'000;
  double tol = 1e-10;

  /// beta = gamma = 0.99 / ||A||_2.
  static FppaParams defaults_for(const DenseMatrix& A);
  /// Throws std::invalid_argument unless beta, gamma > 0 and beta * gamma * ||A||_2^2 < 1.
  void validate(const DenseMatrix& A) const;
};

struct FppaTrace {
  std::size_t iterations = 0;
  double final_objective = 0.0;  // ||y - A z||_1 + rho ||z||_1
  bool converged = false;
};

struct FppaResult {
  DenseVec z;
  DenseVec v;
  FppaTrace trace;
};

/// Primal-dual fixed-point proximity iteration for min ||y - A z||_1 + rho ||z||_1:
///   z+ = prox_{beta rho ||.||_1}(z - beta A^T v)
///   v+ = gamma (I - prox_{(1/gamma) ||y - .||_1})(v / gamma + A (2 z+ - z))
/// Stops when the relative l2 change of (z, v) drops below tol.
FppaResult fppa_solve(const DenseMatrix& A, const DenseVec& y, double rho, const FppaParams& params,
                      const DenseVec& z_init, const DenseVec& v_init);
FppaResult fppa_solve(const DenseMatrix& A, const DenseVec& y, double rho);
FppaResult fppa_solve(const TruncatedMatrix& A, const DenseVec& y, double rho);

/// ||y - A z||_1 + rho ||z||_1.
double l1_fit_objective(const DenseMatrix& A, const DenseVec& y, double rho, const DenseVec& z);

}  // namespace l1dual
