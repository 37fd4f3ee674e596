#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/operators.hpp"

namespace l1dual {

/// maximize c.x subject to lower_i <= row_i . x <= upper_i and lo_j <= x_j <= hi_j.
/// One-sided rows use -inf/+inf for the missing side; bounds may be infinite.
class LinearProgram {
public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const noexcept { return objective_.size(); }
  std::size_t num_rows() const noexcept { return row_lower_.size(); }

  void set_objective(std::span<const double> c);
  void set_bounds(std::size_t j, double lo, double hi);
  void set_all_bounds(double lo, double hi);

  /// row . x <= rhs
  void add_le(std::span<const double> row, double rhs);
  /// row . x >= rhs
  void add_ge(std::span<const double> row, double rhs);
  /// row . x == rhs
  void add_eq(std::span<const double> row, double rhs);
  /// lower <= row . x <= upper
  void add_range(std::span<const double> row, double lower, double upper);

  const std::vector<double>& objective() const noexcept { return objective_; }
  std::span<const double> row(std::size_t i) const { return {rows_.data() + i * num_vars(), num_vars()}; }
  double row_lower(std::size_t i) const { return row_lower_[i]; }
  double row_upper(std::size_t i) const { return row_upper_[i]; }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }

  /// Number of scalar inequalities "expr <= const" the program encodes:
  /// each finite side of a row counts once (an equality counts twice).
  std::size_t row_inequality_count() const;
  /// Same count for the finite variable bounds.
  std::size_t bound_inequality_count() const;

private:
  std::vector<double> objective_;
  std::vector<double> lower_, upper_;
  std::vector<double> rows_;  // row-major, num_rows x num_vars
  std::vector<double> row_lower_, row_upper_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s) noexcept;

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  DenseVec argmax;                    // x (Optimal only)
  double value = 0.0;                 // c.x (Optimal only)
  /// Certificate: c = A^T row_duals + reduced_costs, with row_duals[i] > 0 only
  /// when row i sits at its upper side, < 0 only at its lower side, and
  /// reduced_costs[j] likewise for the variable bounds.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  std::size_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_switch = 50;
  std::size_t refactor_interval = 1000;
  /// 0 picks a cap proportional to the problem size.
  std::size_t max_iterations = 0;
};

/// Bounded-variable primal simplex on a dense condensed tableau. Dantzig
/// pricing with a switch to Bland's rule on degenerate stalls, so it cannot
/// cycle; fully deterministic. Throws NumericalError when the iteration cap is hit.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

struct CertificateReport {
  double primal_infeasibility = 0.0;     // worst bound / row violation
  double stationarity = 0.0;             // max |c - A^T y - r|
  double complementary_slackness = 0.0;  // max |multiplier| * distance to its active side
  double sign_violation = 0.0;           // multiplier with the wrong sign for its side
  double duality_gap = 0.0;              // |c.x - dual objective|
};

/// Evaluates the optimality certificate of an Optimal result against the program.
CertificateReport check_certificate(const LinearProgram& lp, const LpResult& res);

struct MinL1Result {
  LpStatus status = LpStatus::Infeasible;
  DenseVec z;
  double value = 0.0;  // ||z||_1
};

/// min ||z||_1 subject to A z = y, via the split z = u - v with u, v >= 0.
MinL1Result min_l1_solve(const DenseMatrix& A, const DenseVec& y, const LpOptions& opts = {});
MinL1Result min_l1_solve(const TruncatedMatrix& A, const DenseVec& y, const LpOptions& opts = {});

struct L1FitResult {
  LpStatus status = LpStatus::Infeasible;
  DenseVec z;
  double value = 0.0;  // ||y - A z||_1 + rho ||z||_1
};

/// Exact LP reformulation of min ||y - A z||_1 + rho ||z||_1 (split variables
/// for both terms). Serves as the oracle for the proximity iteration.
L1FitResult l1_fit_lp(const DenseMatrix& A, const DenseVec& y, double rho, const LpOptions& opts = {});

}  // namespace l1dual
