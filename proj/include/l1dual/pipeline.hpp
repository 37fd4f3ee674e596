#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/fppa.hpp"
#include "l1dual/lp.hpp"
#include "l1dual/operators.hpp"
#include "l1dual/polytope.hpp"

namespace l1dual {

/// min (||y0 - A x||_1^p + rho ||x||_1^p)^{1/p} over l1(N).
struct RegularizationProblem {
  RowFamily rows;
  DenseVec y0;
  double rho = 1.0;
  double p = 1.0;

  /// Throws std::invalid_argument on rho <= 0, p < 1, or a y0 of the wrong length.
  void validate() const;
};

enum class N0Kind { Fixed, Vertices, Objective };

struct N0Strategy {
  N0Kind kind = N0Kind::Fixed;
  std::int64_t n = 0;      // Fixed: the constraint count
  std::int64_t start = 0;  // first n (or l) examined; 0 means m
  double rho = 0.0;        // rho used for the search; 0 means the problem's rho
  bool box = false;        // Vertices: count with |lambda_j| <= 1 included
  std::int64_t cap = 0;    // 0 picks the strategy default

  static N0Strategy fixed(std::int64_t n) { return {N0Kind::Fixed, n}; }
  static N0Strategy vertices(std::int64_t start = 0) { return {N0Kind::Vertices, 0, start}; }
  static N0Strategy objective(std::int64_t start = 0, double rho = 0.0) { return {N0Kind::Objective, 0, start, rho}; }
};

const char* to_string(N0Kind k) noexcept;

struct N0Resolution {
  std::int64_t n0 = 0;
  std::vector<VertexCount> vertex_counts;
  std::vector<ObjectivePoint> objective_sweep;
};

/// Applies the strategy to the problem's rows and data.
N0Resolution resolve_n0(const RegularizationProblem& problem, const N0Strategy& strategy);

struct SolveOptions {
  double peak_tol = 1e-6;        // relative tolerance of peak-set membership
  double tie_tol = 1e-9;         // branch test: ties go to the finite solve
  double feasibility_slack = 1e-8;
  std::size_t fppa_max_iter = 200'000;
  double fppa_tol = 1e-10;
  bool lp_oracle = true;         // cross-check the finite problem by LP
  double oracle_disagreement = 1e-5;
  LpOptions lp;
  SupNormOptions sup;
};

struct DualSolution {
  DenseVec lambda;
  double S = 0.0;
  std::int64_t n0 = 0;
  CertifiedSupNorm sup;             // ||A_* lambda||_inf over all k, with prefix
  std::vector<std::int64_t> peak;   // N(A_* lambda)
  LpResult lp;                      // includes the optimality certificate
  bool certified_feasible = false;  // A_* lambda within rho at every k

  double astar_sup() const noexcept { return sup.value; }
  /// The Z-side dual variable -(1/rho) A_* lambda over the scanned prefix.
  SparseSeq z_dual(double rho) const;
};

enum class Branch { ZeroSolution, FiniteSolve };

const char* to_string(Branch b) noexcept;

struct PrimalSolution {
  SparseSeq x;
  double f_r = 0.0;
  Branch branch = Branch::ZeroSolution;
  std::int64_t sparsity = 0;
  DualSolution dual;
  FppaTrace fppa;
  std::string solver_used;  // "none", "fppa" or "lp"
  std::map<std::string, double> diagnostics;
};

/// Dual LP of the p = 1 problem: max y0.lambda with |lambda_j| <= 1 and
/// |sum_j lambda_j a_{j,k}| <= rho for k <= n0.
LinearProgram assemble_dual_p1(const RegularizationProblem& problem, std::int64_t n0);

/// Evaluators for the p > 1 dual: maximise y0.lambda subject to
/// ||lambda||_inf^{p'} + rho^{1-p'} ||A_* lambda||_inf^{p'} <= 1.
struct DualPgt1 {
  double p = 2.0;
  double p_conj = 2.0;
  double rho = 1.0;
  std::function<double(const DenseVec&)> objective;
  std::function<double(const DenseVec&)> constraint;  // left-hand side
  bool feasible(const DenseVec& lambda, double tol = 1e-12) const { return constraint(lambda) <= 1.0 + tol; }
};

DualPgt1 assemble_dual_pgt1(const RegularizationProblem& problem);

DualSolution solve_dual(const RegularizationProblem& problem, const N0Strategy& strategy,
                        const SolveOptions& opts = {});
/// Dual solve with n0 already known.
DualSolution solve_dual_fixed(const RegularizationProblem& problem, std::int64_t n0, const SolveOptions& opts = {});

/// Zero-solution test, peak-set truncation, finite solve and augmentation
/// applied to a solved dual.
PrimalSolution recover_primal(const RegularizationProblem& problem, DualSolution dual, const SolveOptions& opts = {});

PrimalSolution solve_regularized(const RegularizationProblem& problem, const N0Strategy& strategy,
                                 const SolveOptions& opts = {});

struct InterpOptions {
  double peak_tol = 1e-6;
  double retry_peak_tol = 1e-3;  // one widened attempt when the truncated system is inconsistent
  std::int64_t l_start = 0;      // 0 means m
  N0ObjectiveOptions n0;
  LpOptions lp;
};

struct InterpResult {
  SparseSeq x;
  double norm = 0.0;  // ||x||_1
  double dual_value = 0.0;
  std::int64_t n0 = 0;
  std::vector<std::int64_t> peak;
  bool retried = false;
};

/// Minimum-norm interpolation min ||x||_1 subject to A x = y, through its
/// dual max y.lambda subject to ||A_* lambda||_inf <= 1.
InterpResult solve_min_norm_interp(const RowFamily& rows, const DenseVec& y, const InterpOptions& opts = {});

}  // namespace l1dual
