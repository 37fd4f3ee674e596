#include "l1dual/fppa.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dual/simd.hpp"

namespace l1dual {

DenseVec prox_scaled_l1(const DenseVec& w, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("prox_scaled_l1: threshold must be >= 0");
  DenseVec out(w.size());
  simd::active().soft_threshold(w.span().data(), t, out.span().data(), w.size());
  return out;
}

DenseVec prox_residual_l1(const DenseVec& w, const DenseVec& y, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("prox_residual_l1: step must be >= 0");
  if (w.size() != y.size()) throw std::invalid_argument("prox_residual_l1: length mismatch");
  DenseVec out(w.size());
  simd::active().clamp_toward(w.span().data(), y.span().data(), s, out.span().data(), w.size());
  return out;
}

FppaParams FppaParams::defaults_for(const DenseMatrix& A) {
  const double nrm = spectral_norm(A);
  if (!(nrm > 0.0)) throw std::invalid_argument("FppaParams: matrix is zero");
  FppaParams p;
  p.beta = p.gamma = 0.99 / nrm;
  return p;
}

void FppaParams::validate(const DenseMatrix& A) const {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("FppaParams: beta and gamma must be positive");
  if (max_iter == 0) throw std::invalid_argument("FppaParams: max_iter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("FppaParams: tol must be positive");
  const double nrm = spectral_norm(A);
  if (!(beta * gamma * nrm * nrm < 1.0)) {
    throw std::invalid_argument("FppaParams: beta * gamma * ||A||^2 = " + std::to_string(beta * gamma * nrm * nrm) +
                                " must be < 1");
  }
}

double l1_fit_objective(const DenseMatrix& A, const DenseVec& y, double rho, const DenseVec& z) {
  const auto az = A.multiply(z.span());
  double fit = 0.0;
  for (std::size_t i = 0; i < az.size(); ++i) fit += std::fabs(y[i] - az[i]);
  return fit + rho * simd::sum_abs(z.span());
}

FppaResult fppa_solve(const DenseMatrix& A, const DenseVec& y, double rho, const FppaParams& params,
                      const DenseVec& z_init, const DenseVec& v_init) {
  const std::size_t m = A.rows(), n = A.cols();
  if (y.size() != m || z_init.size() != n || v_init.size() != m) {
    throw std::invalid_argument("fppa_solve: dimension mismatch");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("fppa_solve: rho must be positive");
  params.validate(A);

  const auto& K = simd::active();
  const double beta = params.beta, gamma = params.gamma;
  std::vector<double> z(z_init.values()), v(v_init.values());
  std::vector<double> zn(n), vn(m), w(n), u(n), au, pw(m);

  FppaResult res;
  for (std::size_t it = 1; it <= params.max_iter; ++it) {
    // z+ = soft(z - beta A^T v, beta rho)
    const auto atv = A.multiply_transpose(v);
    for (std::size_t j = 0; j < n; ++j) w[j] = z[j] - beta * atv[j];
    K.soft_threshold(w.data(), beta * rho, zn.data(), n);

    // v+ = gamma (q - prox(q)),  q = v / gamma + A (2 z+ - z)
    for (std::size_t j = 0; j < n; ++j) u[j] = 2.0 * zn[j] - z[j];
    au = A.multiply(u);
    for (std::size_t i = 0; i < m; ++i) au[i] += v[i] / gamma;
    K.clamp_toward(au.data(), y.span().data(), 1.0 / gamma, pw.data(), m);
    for (std::size_t i = 0; i < m; ++i) vn[i] = gamma * (au[i] - pw[i]);

    double diff = 0.0, size = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      diff += (zn[j] - z[j]) * (zn[j] - z[j]);
      size += zn[j] * zn[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      diff += (vn[i] - v[i]) * (vn[i] - v[i]);
      size += vn[i] * vn[i];
    }
    if (!std::isfinite(diff) || !std::isfinite(size)) {
      throw NumericalError("fppa_solve: non-finite iterate at step " + std::to_string(it));
    }
    z.swap(zn);
    v.swap(vn);
    res.trace.iterations = it;
    if (std::sqrt(diff) <= params.tol * std::max(std::sqrt(size), 1e-300)) {
      res.trace.converged = true;
      break;
    }
  }
  res.z = DenseVec(std::move(z));
  res.v = DenseVec(std::move(v));
  res.trace.final_objective = l1_fit_objective(A, y, rho, res.z);
  return res;
}

FppaResult fppa_solve(const DenseMatrix& A, const DenseVec& y, double rho) {
  return fppa_solve(A, y, rho, FppaParams::defaults_for(A), DenseVec(A.cols(), 0.0), DenseVec(A.rows(), 0.0));
}

FppaResult fppa_solve(const TruncatedMatrix& A, const DenseVec& y, double rho) { return fppa_solve(A.data, y, rho); }

}  // namespace l1dual
