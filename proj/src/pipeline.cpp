#include "l1dual/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dual/simd.hpp"

namespace l1dual {

void RegularizationProblem::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be a positive finite number");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (y0.size() != static_cast<std::size_t>(rows.m())) {
    throw std::invalid_argument("y0 has length " + std::to_string(y0.size()) + ", expected m = " +
                                std::to_string(rows.m()));
  }
  for (double v : y0) {
    if (!std::isfinite(v)) throw std::invalid_argument("y0 has a non-finite entry");
  }
}

const char* to_string(N0Kind k) noexcept {
  switch (k) {
    case N0Kind::Fixed: return "fixed";
    case N0Kind::Vertices: return "vertices";
    case N0Kind::Objective: return "objective";
  }
  return "unknown";
}

const char* to_string(Branch b) noexcept {
  return b == Branch::ZeroSolution ? "ZeroSolution" : "FiniteSolve";
}

N0Resolution resolve_n0(const RegularizationProblem& problem, const N0Strategy& strategy) {
  problem.validate();
  N0Resolution out;
  const std::int64_t start = strategy.start > 0 ? strategy.start : problem.rows.m();
  const double rho = strategy.rho > 0.0 ? strategy.rho : problem.rho;
  switch (strategy.kind) {
    case N0Kind::Fixed:
      if (strategy.n < 1) throw std::invalid_argument("fixed n0 must be >= 1");
      out.n0 = strategy.n;
      break;
    case N0Kind::Vertices: {
      N0VertexOptions vo;
      vo.box = strategy.box;
      if (strategy.cap > 0) vo.n_cap = strategy.cap;
      auto r = find_n0_by_vertices(problem.rows, rho, start, vo);
      out.n0 = r.n0;
      out.vertex_counts = std::move(r.counts);
      break;
    }
    case N0Kind::Objective: {
      N0ObjectiveOptions oo;
      if (strategy.cap > 0) oo.l_cap = strategy.cap;
      auto r = find_n0_by_objective(problem.rows, problem.y0, rho, start, oo);
      out.n0 = r.n0;
      out.objective_sweep = std::move(r.sweep);
      break;
    }
  }
  return out;
}

SparseSeq DualSolution::z_dual(double rho) const {
  std::vector<double> scaled(sup.prefix);
  for (double& v : scaled) v = -v / rho;
  return SparseSeq::from_prefix(scaled);
}

LinearProgram assemble_dual_p1(const RegularizationProblem& problem, std::int64_t n0) {
  problem.validate();
  if (problem.p != 1.0) throw std::invalid_argument("assemble_dual_p1: requires p = 1");
  if (n0 < 1) throw std::invalid_argument("assemble_dual_p1: n0 must be >= 1");
  return dual_lp(problem.rows, problem.y0, problem.rho, n0, true);
}

DualPgt1 assemble_dual_pgt1(const RegularizationProblem& problem) {
  problem.validate();
  if (!(problem.p > 1.0) || std::isinf(problem.p)) throw std::invalid_argument("assemble_dual_pgt1: requires 1 < p < inf");
  DualPgt1 d;
  d.p = problem.p;
  d.p_conj = problem.p / (problem.p - 1.0);
  d.rho = problem.rho;
  const DenseVec y0 = problem.y0;
  const RowFamily rows = problem.rows;
  d.objective = [y0](const DenseVec& lambda) { return dot(y0.span(), lambda.span()); };
  const double pc = d.p_conj;
  const double weight = std::pow(problem.rho, 1.0 - pc);
  d.constraint = [rows, pc, weight](const DenseVec& lambda) {
    const double box = sup_norm(lambda);
    const double astar = l1_norm(lambda) > 0.0 ? sup_norm_certified(rows, lambda).value : 0.0;
    return std::pow(box, pc) + weight * std::pow(astar, pc);
  };
  return d;
}

DualSolution solve_dual_fixed(const RegularizationProblem& problem, std::int64_t n0, const SolveOptions& opts) {
  const LinearProgram lp = assemble_dual_p1(problem, n0);
  DualSolution out;
  out.n0 = n0;
  out.lp = solve_lp(lp, opts.lp);
  if (out.lp.status != LpStatus::Optimal) {
    // The box keeps the program bounded and lambda = 0 is feasible.
    throw NumericalError(std::string("solve_dual: dual LP returned ") + to_string(out.lp.status));
  }
  out.lambda = out.lp.argmax;
  out.S = out.lp.value;
  if (l1_norm(out.lambda) > 0.0) {
    SupNormOptions so = opts.sup;
    so.cover_rel_tol = std::max(so.cover_rel_tol, opts.peak_tol);
    out.sup = sup_norm_certified(problem.rows, out.lambda, so);
    out.peak = peak_set(out.sup, opts.peak_tol);
  }
  out.certified_feasible = out.sup.value <= problem.rho * (1.0 + opts.feasibility_slack);
  return out;
}

DualSolution solve_dual(const RegularizationProblem& problem, const N0Strategy& strategy, const SolveOptions& opts) {
  problem.validate();
  if (problem.p != 1.0) throw std::invalid_argument("solve_dual: the solve path is implemented for p = 1");
  return solve_dual_fixed(problem, resolve_n0(problem, strategy).n0, opts);
}

namespace {

double objective_on_sequence(const RegularizationProblem& problem, const SparseSeq& x) {
  const DenseVec ax = apply_A(problem.rows, x);
  double fit = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) fit += std::fabs(problem.y0[i] - ax[i]);
  return fit + problem.rho * l1_norm(x);
}

}  // namespace

PrimalSolution recover_primal(const RegularizationProblem& problem, DualSolution dual, const SolveOptions& opts) {
  PrimalSolution out;
  const double lam_inf = sup_norm(dual.lambda);
  const double astar = dual.sup.value;
  out.diagnostics["S"] = dual.S;
  out.diagnostics["rho_lambda_inf"] = problem.rho * lam_inf;
  out.diagnostics["astar_sup"] = astar;
  out.diagnostics["n0"] = static_cast<double>(dual.n0);
  out.diagnostics["dual_certified_feasible"] = dual.certified_feasible ? 1.0 : 0.0;

  if (problem.rho * lam_inf > astar * (1.0 + opts.tie_tol)) {
    out.branch = Branch::ZeroSolution;
    out.solver_used = "none";
    out.f_r = l1_norm(problem.y0);
  } else {
    out.branch = Branch::FiniteSolve;
    if (dual.peak.empty()) throw NumericalError("recover_primal: empty peak set on the finite branch");
    const TruncatedMatrix Ac = truncate_matrix(problem.rows, dual.peak);

    FppaParams fp = FppaParams::defaults_for(Ac.data);
    fp.max_iter = opts.fppa_max_iter;
    fp.tol = opts.fppa_tol;
    const FppaResult fr =
        fppa_solve(Ac.data, problem.y0, problem.rho, fp, DenseVec(Ac.cols(), 0.0), DenseVec(Ac.rows(), 0.0));
    out.fppa = fr.trace;
    out.diagnostics["fppa_objective"] = fr.trace.final_objective;
    out.diagnostics["fppa_iterations"] = static_cast<double>(fr.trace.iterations);
    out.diagnostics["fppa_converged"] = fr.trace.converged ? 1.0 : 0.0;

    DenseVec z = fr.z;
    out.solver_used = "fppa";
    if (opts.lp_oracle) {
      const L1FitResult lr = l1_fit_lp(Ac.data, problem.y0, problem.rho, opts.lp);
      if (lr.status == LpStatus::Optimal) {
        out.diagnostics["lp_objective"] = lr.value;
        const double rel = (fr.trace.final_objective - lr.value) / std::max(lr.value, 1e-300);
        out.diagnostics["fppa_lp_rel_gap"] = rel;
        if (rel > opts.oracle_disagreement) {
          z = lr.z;
          out.solver_used = "lp";
        }
      }
    }
    out.x = SparseSeq::scatter(dual.peak, z.span());
    out.f_r = objective_on_sequence(problem, out.x);
  }
  out.sparsity = static_cast<std::int64_t>(out.x.nnz());

  const DenseVec ax = apply_A(problem.rows, out.x);
  std::vector<double> res(ax.size());
  for (std::size_t i = 0; i < ax.size(); ++i) res[i] = problem.y0[i] - ax[i];
  out.diagnostics["residual_l1"] = l1_norm(res);
  out.diagnostics["residual_l2"] = l2_norm(res);
  out.diagnostics["residual_pairing"] = dot(res, dual.lambda.span());
  out.diagnostics["f_r"] = out.f_r;
  out.diagnostics["gap"] = out.f_r - dual.S;
  out.dual = std::move(dual);
  return out;
}

PrimalSolution solve_regularized(const RegularizationProblem& problem, const N0Strategy& strategy,
                                 const SolveOptions& opts) {
  return recover_primal(problem, solve_dual(problem, strategy, opts), opts);
}

InterpResult solve_min_norm_interp(const RowFamily& rows, const DenseVec& y, const InterpOptions& opts) {
  if (y.size() != static_cast<std::size_t>(rows.m())) throw std::invalid_argument("solve_min_norm_interp: y length must equal m");
  if (l1_norm(y) == 0.0) throw std::invalid_argument("solve_min_norm_interp: y must be nonzero");
  InterpResult out;

  N0ObjectiveOptions oo = opts.n0;
  oo.box = false;
  oo.lp = opts.lp;
  const std::int64_t start = opts.l_start > 0 ? opts.l_start : rows.m();
  const N0ByObjective n0 = find_n0_by_objective(rows, y, 1.0, start, oo);
  out.n0 = n0.n0;

  const LpResult lr = solve_lp(dual_lp(rows, y, 1.0, out.n0, false), opts.lp);
  if (lr.status != LpStatus::Optimal) {
    throw NumericalError(std::string("solve_min_norm_interp: dual LP returned ") + to_string(lr.status));
  }
  out.dual_value = lr.value;

  for (const double tol : {opts.peak_tol, opts.retry_peak_tol}) {
    SupNormOptions so;
    so.cover_rel_tol = std::max(so.cover_rel_tol, tol);
    const CertifiedSupNorm sup = sup_norm_certified(rows, lr.argmax, so);
    out.peak = peak_set(sup, tol);
    const MinL1Result mr = min_l1_solve(truncate_matrix(rows, out.peak), y, opts.lp);
    if (mr.status == LpStatus::Optimal) {
      out.x = SparseSeq::scatter(out.peak, mr.z.span());
      out.norm = l1_norm(out.x);
      return out;
    }
    if (tol == opts.retry_peak_tol) break;
    out.retried = true;
  }
  throw NumericalError("solve_min_norm_interp: truncated system inconsistent even with peak tolerance " +
                       std::to_string(opts.retry_peak_tol));
}

}  // namespace l1dual
