#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dual/polytope.hpp"

namespace l1dual {

std::vector<VertexCount> vertex_counts(const RowFamily& rows, double rho, std::int64_t n_max,
                                       const N0VertexOptions& opts) {
  if (n_max < 1) throw std::invalid_argument("vertex_counts: n_max must be >= 1");
  SlabVertexSweep sweep(rows.m(), rho, opts.box, opts.enumeration);
  std::vector<VertexCount> out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    sweep.add_slab(rows.column(n));
    out.push_back({n, sweep.bounded(), sweep.vertex_count()});
  }
  return out;
}

N0ByVertices find_n0_by_vertices(const RowFamily& rows, double rho, std::int64_t n_start,
                                 const N0VertexOptions& opts) {
  if (n_start < 1) throw std::invalid_argument("find_n0_by_vertices: n_start must be >= 1");
  SlabVertexSweep sweep(rows.m(), rho, opts.box, opts.enumeration);
  N0ByVertices res;
  VertexSet previous;
  for (std::int64_t n = 1; n <= opts.n_cap + 1; ++n) {
    sweep.add_slab(rows.column(n));
    res.counts.push_back({n, sweep.bounded(), sweep.vertex_count()});
    if (n < n_start) continue;
    VertexSet current = sweep.vertices();
    if (n > n_start && previous.bounded && same_vertices(previous, current)) {
      res.n0 = n - 1;
      res.final_count = current.size();
      return res;
    }
    previous = std::move(current);
  }
  throw NumericalError("find_n0_by_vertices: vertex sets still changing at n_cap = " + std::to_string(opts.n_cap));
}

LinearProgram dual_lp(const RowFamily& rows, const DenseVec& y0, double rho, std::int64_t l, bool box) {
  if (y0.size() != static_cast<std::size_t>(rows.m())) throw std::invalid_argument("dual_lp: y0 length must equal m");
  if (!(rho > 0.0)) throw std::invalid_argument("dual_lp: rho must be positive");
  if (l < 0) throw std::invalid_argument("dual_lp: negative constraint count");
  LinearProgram lp(y0.size());
  lp.set_objective(y0.span());
  if (box) lp.set_all_bounds(-1.0, 1.0);
  for (std::int64_t k = 1; k <= l; ++k) lp.add_range(rows.column(k), -rho, rho);
  return lp;
}

N0ByObjective find_n0_by_objective(const RowFamily& rows, const DenseVec& y0, double rho, std::int64_t l_start,
                                   const N0ObjectiveOptions& opts) {
  if (l_start < 1) throw std::invalid_argument("find_n0_by_objective: l_start must be >= 1");
  N0ByObjective res;
  auto evaluate = [&](std::int64_t l) {
    const LpResult lr = solve_lp(dual_lp(rows, y0, rho, l, opts.box), opts.lp);
    if (lr.status != LpStatus::Optimal) {
      throw NumericalError("find_n0_by_objective: dual LP at l = " + std::to_string(l) + " is " + to_string(lr.status));
    }
    ObjectivePoint pt{l, lr.value, 0.0, false};
    if (l1_norm(lr.argmax) > 0.0) {
      pt.sup_norm = sup_norm_certified(rows, lr.argmax).value;
    }
    pt.certified = pt.sup_norm <= rho * (1.0 + opts.feasibility_slack);
    if (!res.sweep.empty() && pt.S > res.sweep.back().S * (1.0 + opts.tol_S) + 1e-15) res.nonincreasing = false;
    res.sweep.push_back(pt);
  };
  auto same = [&](double a, double b) { return std::fabs(a - b) <= opts.tol_S * std::max(std::fabs(a), std::fabs(b)); };

  evaluate(l_start);
  evaluate(l_start + 1);
  for (std::int64_t l = l_start; l <= opts.l_cap; ++l) {
    evaluate(l + 2);
    const auto& a = res.sweep[static_cast<std::size_t>(l - l_start)];
    const auto& b = res.sweep[static_cast<std::size_t>(l - l_start + 1)];
    const auto& c = res.sweep[static_cast<std::size_t>(l - l_start + 2)];
    if (same(a.S, b.S) && same(b.S, c.S) && (!opts.require_certified || a.certified)) {
      res.n0 = l;
      return res;
    }
  }
  throw NumericalError("find_n0_by_objective: S(l) not stabilised by l_cap = " + std::to_string(opts.l_cap));
}

}  // namespace l1dual
