#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/matrix.hpp"

namespace l1dual {

/// The m rows a_j in c0(N) of a semi-infinite matrix A : l1(N) -> R^m.
///
/// Each family declares an envelope with |a_{j,k}| <= envelope(k), envelope
/// nonincreasing and tending to zero. The envelope is what makes the infinite
/// sup norm of A_* lambda computable (see sup_norm_certified).
class RowFamily {
public:
  using RowEval = std::function<double(int j, std::int64_t k)>;
  using Envelope = std::function<double(std::int64_t k)>;

  RowFamily(int m, RowEval row_eval, Envelope envelope, std::string id = "custom",
            std::map<std::string, double> params = {});

  int m() const noexcept { return m_; }
  /// a_{j,k} for 1 <= j <= m, k >= 1.
  double operator()(int j, std::int64_t k) const { return row_eval_(j, k); }
  double envelope(std::int64_t k) const { return envelope_(k); }
  const std::string& id() const noexcept { return id_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }

  /// Column k, i.e. (a_{1,k}, ..., a_{m,k}).
  void column(std::int64_t k, std::span<double> out) const;
  std::vector<double> column(std::int64_t k) const;

private:
  int m_;
  RowEval row_eval_;
  Envelope envelope_;
  std::string id_;
  std::map<std::string, double> params_;
};

/// Columns of A restricted to an ascending index set (A_c in the pipeline).
struct TruncatedMatrix {
  std::vector<std::int64_t> columns_index;
  DenseMatrix data;  // m x |columns_index|

  std::size_t rows() const noexcept { return data.rows(); }
  std::size_t cols() const noexcept { return data.cols(); }
};

/// Ax for finitely supported x.
DenseVec apply_A(const RowFamily& rows, const SparseSeq& x);

/// First K entries of A_* lambda = sum_j lambda_j a_j.
DenseVec apply_Astar_prefix(const RowFamily& rows, const DenseVec& lambda, std::int64_t K);

struct CertifiedSupNorm {
  double value = 0.0;                 // ||A_* lambda||_inf
  std::vector<std::int64_t> argmax;   // k <= k_cert within rel_tol of value
  std::int64_t k_cert = 0;            // no index beyond this can exceed value
  std::vector<double> prefix;         // (A_* lambda)_k for k <= k_cover
  std::int64_t k_cover = 0;           // prefix length; certifies entries within cover_rel_tol
  double cover_rel_tol = 0.0;
};

struct SupNormOptions {
  double rel_tol = 1e-9;
  /// The scan continues until no later entry can come within this relative
  /// distance of the maximum, so peak sets up to this tolerance are complete.
  double cover_rel_tol = 1e-6;
  std::int64_t k_max = 10'000'000;
};

/// ||A_* lambda||_inf over all of N. Scans k = 1, 2, ... and stops at the
/// first K with ||lambda||_1 * envelope(K+1) < value * (1 - rel_tol), which
/// bounds every later entry below the running maximum. Throws NumericalError
/// if no certificate is reached by k_max.
CertifiedSupNorm sup_norm_certified(const RowFamily& rows, const DenseVec& lambda,
                                    const SupNormOptions& opts = {});

/// N(mu): indices k with |mu_k| >= value * (1 - rel_tol_support), ascending.
/// rel_tol_support may not exceed the cover tolerance of the scan.
std::vector<std::int64_t> peak_set(const CertifiedSupNorm& sup, double rel_tol_support = 1e-6);

/// Dense m x |N| matrix with entry (i, j) = a_{i, N_j}.
TruncatedMatrix truncate_matrix(const RowFamily& rows, std::span<const std::int64_t> N);

}  // namespace l1dual
