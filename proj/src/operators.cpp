#include "l1dual/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dual/simd.hpp"

namespace l1dual {

RowFamily::RowFamily(int m, RowEval row_eval, Envelope envelope, std::string id,
                     std::map<std::string, double> params)
    : m_(m),
      row_eval_(std::move(row_eval)),
      envelope_(std::move(envelope)),
      id_(std::move(id)),
      params_(std::move(params)) {
  if (m_ <= 0) throw std::invalid_argument("RowFamily: m must be positive");
  if (!row_eval_ || !envelope_) throw std::invalid_argument("RowFamily: row_eval and envelope are required");
}

void RowFamily::column(std::int64_t k, std::span<double> out) const {
  for (int j = 1; j <= m_; ++j) out[j - 1] = row_eval_(j, k);
}

std::vector<double> RowFamily::column(std::int64_t k) const {
  std::vector<double> c(static_cast<std::size_t>(m_));
  column(k, c);
  return c;
}

DenseVec apply_A(const RowFamily& rows, const SparseSeq& x) {
  DenseVec y(static_cast<std::size_t>(rows.m()), 0.0);
  std::vector<double> col(static_cast<std::size_t>(rows.m()));
  for (const auto& e : x.entries()) {
    rows.column(e.index, col);
    simd::axpy(e.value, col, y.span());
  }
  return y;
}

DenseVec apply_Astar_prefix(const RowFamily& rows, const DenseVec& lambda, std::int64_t K) {
  if (lambda.size() != static_cast<std::size_t>(rows.m())) {
    throw std::invalid_argument("apply_Astar_prefix: lambda has length " + std::to_string(lambda.size()) +
                                ", expected " + std::to_string(rows.m()));
  }
  DenseVec out(static_cast<std::size_t>(K), 0.0);
  std::vector<double> col(static_cast<std::size_t>(rows.m()));
  for (std::int64_t k = 1; k <= K; ++k) {
    rows.column(k, col);
    out[static_cast<std::size_t>(k - 1)] = simd::dot(col, lambda.span());
  }
  return out;
}

CertifiedSupNorm sup_norm_certified(const RowFamily& rows, const DenseVec& lambda, const SupNormOptions& opts) {
  if (lambda.size() != static_cast<std::size_t>(rows.m())) {
    throw std::invalid_argument("sup_norm_certified: lambda length does not match m");
  }
  CertifiedSupNorm out;
  const double lnorm = l1_norm(lambda);
  if (lnorm == 0.0) return out;

  const double cover = std::max(opts.cover_rel_tol, opts.rel_tol);
  out.cover_rel_tol = cover;
  std::vector<double> col(static_cast<std::size_t>(rows.m()));
  double best = 0.0;
  for (std::int64_t k = 1;; ++k) {
    if (k > opts.k_max) {
      throw NumericalError("sup_norm_certified: no certificate within k_max = " + std::to_string(opts.k_max) +
                           " (envelope of family '" + rows.id() + "' decays too slowly)");
    }
    rows.column(k, col);
    const double v = simd::dot(col, lambda.span());
    out.prefix.push_back(v);
    best = std::max(best, std::fabs(v));
    if (best == 0.0) continue;
    const double tail = lnorm * rows.envelope(k + 1);
    if (out.k_cert == 0 && tail < best * (1.0 - opts.rel_tol)) out.k_cert = k;
    if (tail < best * (1.0 - cover)) {
      out.k_cover = k;
      break;
    }
  }
  out.value = best;
  const double cut = best * (1.0 - opts.rel_tol);
  for (std::size_t i = 0; i < static_cast<std::size_t>(out.k_cert); ++i) {
    if (std::fabs(out.prefix[i]) >= cut) out.argmax.push_back(static_cast<std::int64_t>(i + 1));
  }
  return out;
}

std::vector<std::int64_t> peak_set(const CertifiedSupNorm& sup, double rel_tol_support) {
  if (rel_tol_support > sup.cover_rel_tol) {
    throw std::invalid_argument("peak_set: rel_tol_support exceeds the tolerance covered by the scan");
  }
  return peak_indices(sup.prefix, rel_tol_support);
}

TruncatedMatrix truncate_matrix(const RowFamily& rows, std::span<const std::int64_t> N) {
  if (N.empty()) throw std::invalid_argument("truncate_matrix: empty index set");
  for (std::size_t j = 0; j < N.size(); ++j) {
    if (N[j] < 1 || (j > 0 && N[j] <= N[j - 1])) {
      throw std::invalid_argument("truncate_matrix: indices must be positive and ascending");
    }
  }
  TruncatedMatrix t{{N.begin(), N.end()}, DenseMatrix(static_cast<std::size_t>(rows.m()), N.size())};
  for (int i = 1; i <= rows.m(); ++i) {
    for (std::size_t j = 0; j < N.size(); ++j) t.data(static_cast<std::size_t>(i - 1), j) = rows(i, N[j]);
  }
  return t;
}

}  // namespace l1dual
