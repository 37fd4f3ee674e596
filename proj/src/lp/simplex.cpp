#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dual/lp.hpp"
#include "l1dual/simd.hpp"

namespace l1dual {

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective_(num_vars, 0.0), lower_(num_vars, -kInf), upper_(num_vars, kInf) {}

void LinearProgram::set_objective(std::span<const double> c) {
  if (c.size() != num_vars()) throw std::invalid_argument("LinearProgram::set_objective: length mismatch");
  objective_.assign(c.begin(), c.end());
}

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
  if (j >= num_vars()) throw std::invalid_argument("LinearProgram::set_bounds: index out of range");
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("LinearProgram::set_bounds: need lo <= hi");
  }
  lower_[j] = lo;
  upper_[j] = hi;
}

void LinearProgram::set_all_bounds(double lo, double hi) {
  for (std::size_t j = 0; j < num_vars(); ++j) set_bounds(j, lo, hi);
}

void LinearProgram::add_range(std::span<const double> row, double lower, double upper) {
  if (row.size() != num_vars()) {
    throw std::invalid_argument("LinearProgram: row has length " + std::to_string(row.size()) + ", expected " +
                                std::to_string(num_vars()));
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("LinearProgram: row bounds need lower <= upper");
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
  }
  rows_.insert(rows_.end(), row.begin(), row.end());
  row_lower_.push_back(lower);
  row_upper_.push_back(upper);
}

void LinearProgram::add_le(std::span<const double> row, double rhs) { add_range(row, -kInf, rhs); }
void LinearProgram::add_ge(std::span<const double> row, double rhs) { add_range(row, rhs, kInf); }
void LinearProgram::add_eq(std::span<const double> row, double rhs) { add_range(row, rhs, rhs); }

std::size_t LinearProgram::row_inequality_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < num_rows(); ++i) {
    n += std::isfinite(row_lower_[i]) ? 1 : 0;
    n += std::isfinite(row_upper_[i]) ? 1 : 0;
  }
  return n;
}

std::size_t LinearProgram::bound_inequality_count() const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < num_vars(); ++j) {
    n += std::isfinite(lower_[j]) ? 1 : 0;
    n += std::isfinite(upper_[j]) ? 1 : 0;
  }
  return n;
}

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Variables are numbered 0..n-1 (structural x) and n..n+M-1 (logical s_i = a_i.x).
// The tableau expresses the basic variables as linear functions of the
// nonbasic ones, x_B = T x_N. There is no constant column because the
// defining system A x - s = 0 is homogeneous.
class BoundedSimplex {
public:
  BoundedSimplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
    n_ = lp.num_vars();
    M_ = lp.num_rows();
    lo_.resize(n_ + M_);
    hi_.resize(n_ + M_);
    cost_.assign(n_ + M_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp.lower(j);
      hi_[j] = lp.upper(j);
      cost_[j] = lp.objective()[j];
    }
    for (std::size_t i = 0; i < M_; ++i) {
      lo_[n_ + i] = lp.row_lower(i);
      hi_[n_ + i] = lp.row_upper(i);
    }
    value_.assign(n_ + M_, 0.0);
    basic_.resize(M_);
    nonbasic_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      value_[j] = std::clamp(0.0, lo_[j], hi_[j]);
    }
    for (std::size_t i = 0; i < M_; ++i) basic_[i] = n_ + i;
    T_ = DenseMatrix(M_, n_);
    for (std::size_t i = 0; i < M_; ++i) {
      const auto r = lp.row(i);
      std::copy(r.begin(), r.end(), T_.row(i).begin());
    }
    recompute_basic_values();
    max_iter_ = opts.max_iterations ? opts.max_iterations : 200 * (n_ + M_) + 10000;
  }

  LpResult run() {
    // Up to a few rounds of "iterate, refactor, re-verify": drift during the
    // pivots can leave a final basis that is slightly infeasible or not
    // optimal once the tableau is rebuilt from the original data.
    for (int round = 0; round < 4; ++round) {
      const Outcome oc = iterate();
      reinvert();
      if (oc == Outcome::Infeasible) {
        if (infeasibility() > opts_.feasibility_tol) return finish(LpStatus::Infeasible);
        continue;
      }
      if (oc == Outcome::Unbounded) return finish(LpStatus::Unbounded);
      if (infeasibility() <= opts_.feasibility_tol && !has_improving(false)) return finish(LpStatus::Optimal);
    }
    throw NumericalError("solve_lp: basis did not stabilise after refactorisation");
  }

private:
  enum class Outcome { Optimal, Infeasible, Unbounded };

  double infeasibility_of(std::size_t var) const {
    const double v = value_[var];
    if (v < lo_[var]) return lo_[var] - v;
    if (v > hi_[var]) return v - hi_[var];
    return 0.0;
  }

  double infeasibility() const {
    double worst = 0.0;
    for (std::size_t b : basic_) worst = std::max(worst, infeasibility_of(b));
    return worst;
  }

  void recompute_basic_values() {
    std::vector<double> xn(n_);
    for (std::size_t c = 0; c < n_; ++c) xn[c] = value_[nonbasic_[c]];
    for (std::size_t r = 0; r < M_; ++r) value_[basic_[r]] = simd::dot(T_.row(r), xn);
  }

  // Phase-aware costs of the basic variables; phase 1 pushes infeasible
  // basics toward their violated bound.
  void basic_costs(bool phase1, std::vector<double>& cb) const {
    cb.assign(M_, 0.0);
    for (std::size_t r = 0; r < M_; ++r) {
      const std::size_t b = basic_[r];
      if (phase1) {
        if (value_[b] < lo_[b] - opts_.feasibility_tol) cb[r] = 1.0;
        else if (value_[b] > hi_[b] + opts_.feasibility_tol) cb[r] = -1.0;
      } else {
        cb[r] = cost_[b];
      }
    }
  }

  void reduced_costs(bool phase1, std::vector<double>& d) const {
    std::vector<double> cb;
    basic_costs(phase1, cb);
    d.assign(n_, 0.0);
    if (!phase1) {
      for (std::size_t c = 0; c < n_; ++c) d[c] = cost_[nonbasic_[c]];
    }
    for (std::size_t r = 0; r < M_; ++r) {
      if (cb[r] != 0.0) simd::axpy(cb[r], T_.row(r), d);
    }
  }

  bool can_increase(std::size_t var) const { return value_[var] < hi_[var] - opts_.feasibility_tol; }
  bool can_decrease(std::size_t var) const { return value_[var] > lo_[var] + opts_.feasibility_tol; }

  // Column position of the entering variable, or n_ when none improves.
  std::size_t price(const std::vector<double>& d, bool bland) const {
    std::size_t best = n_;
    double best_score = 0.0;
    for (std::size_t c = 0; c < n_; ++c) {
      const std::size_t var = nonbasic_[c];
      const bool eligible = (d[c] > opts_.optimality_tol && can_increase(var)) ||
                            (d[c] < -opts_.optimality_tol && can_decrease(var));
      if (!eligible) continue;
      if (bland) {
        if (best == n_ || var < nonbasic_[best]) best = c;
      } else if (std::fabs(d[c]) > best_score) {
        best_score = std::fabs(d[c]);
        best = c;
      }
    }
    return best;
  }

  bool has_improving(bool phase1) const {
    std::vector<double> d;
    reduced_costs(phase1, d);
    return price(d, true) != n_;
  }

  // Step limit imposed by basic row r when the entering variable moves by
  // alpha per unit step; kInf when the row does not block.
  double row_limit(std::size_t r, double alpha, bool phase1, double& target) const {
    const std::size_t b = basic_[r];
    const double v = value_[b];
    const double ftol = opts_.feasibility_tol;
    if (alpha > 0.0) {
      if (phase1 && v < lo_[b] - ftol) {
        target = lo_[b];
        return (lo_[b] - v) / alpha;
      }
      if (v > hi_[b] + ftol || !std::isfinite(hi_[b])) return kInf;
      target = hi_[b];
      return std::max(0.0, (hi_[b] - v) / alpha);
    }
    if (phase1 && v > hi_[b] + ftol) {
      target = hi_[b];
      return (hi_[b] - v) / alpha;
    }
    if (v < lo_[b] - ftol || !std::isfinite(lo_[b])) return kInf;
    target = lo_[b];
    return std::max(0.0, (lo_[b] - v) / alpha);
  }

  Outcome iterate() {
    std::vector<double> d;
    std::size_t degenerate_run = 0;
    while (true) {
      const bool phase1 = infeasibility() > opts_.feasibility_tol;
      reduced_costs(phase1, d);
      const bool bland = degenerate_run >= opts_.degenerate_switch;
      const std::size_t c = price(d, bland);
      if (c == n_) return phase1 ? Outcome::Infeasible : Outcome::Optimal;

      if (++iterations_ > max_iter_) {
        throw NumericalError("solve_lp: iteration cap of " + std::to_string(max_iter_) + " reached");
      }

      const std::size_t enter = nonbasic_[c];
      const double dir = d[c] > 0.0 ? 1.0 : -1.0;
      double own = dir > 0.0 ? hi_[enter] - value_[enter] : value_[enter] - lo_[enter];

      // Two passes: find the smallest step, then among near-ties pick the
      // largest pivot (or the smallest variable index under Bland).
      double t_min = kInf;
      for (std::size_t r = 0; r < M_; ++r) {
        const double alpha = T_(r, c) * dir;
        if (std::fabs(alpha) <= opts_.pivot_tol) continue;
        double target;
        t_min = std::min(t_min, row_limit(r, alpha, phase1, target));
      }
      std::size_t leave = M_;
      double leave_target = 0.0;
      if (t_min < kInf && !(own <= t_min)) {
        const double slack = 1e-12 * (1.0 + t_min);
        double best_alpha = 0.0;
        for (std::size_t r = 0; r < M_; ++r) {
          const double alpha = T_(r, c) * dir;
          if (std::fabs(alpha) <= opts_.pivot_tol) continue;
          double target = 0.0;
          const double t = row_limit(r, alpha, phase1, target);
          if (t > t_min + slack) continue;
          const bool better = bland ? (leave == M_ || basic_[r] < basic_[leave]) : std::fabs(alpha) > best_alpha;
          if (better) {
            best_alpha = std::fabs(alpha);
            leave = r;
            leave_target = target;
          }
        }
      }

      if (leave == M_ && !std::isfinite(own)) {
        if (phase1) throw NumericalError("solve_lp: unbounded ray while minimising infeasibility");
        return Outcome::Unbounded;
      }

      const double step = leave == M_ ? own : t_min;
      degenerate_run = step <= opts_.feasibility_tol ? degenerate_run + 1 : 0;

      // Move along the edge.
      value_[enter] += dir * step;
      if (leave == M_) {
        value_[enter] = dir > 0.0 ? hi_[enter] : lo_[enter];
      }
      if (step != 0.0) {
        for (std::size_t r = 0; r < M_; ++r) value_[basic_[r]] += T_(r, c) * dir * step;
      }
      if (leave == M_) continue;  // bound flip, basis unchanged

      const std::size_t out = basic_[leave];
      value_[out] = leave_target;
      pivot(leave, c);
      basic_[leave] = enter;
      nonbasic_[c] = out;

      if (++since_reinvert_ >= opts_.refactor_interval) reinvert();
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = T_(r, c);
    auto prow = T_.row(r);
    for (double& v : prow) v /= -p;
    prow[c] = 1.0 / p;
    for (std::size_t i = 0; i < M_; ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f == 0.0) continue;
      simd::axpy(f, prow, T_.row(i));
      T_(i, c) = f / p;
    }
  }

  // Rebuild T from the original rows for the current basis. With S_B the
  // basic structurals and L_N the nonbasic logicals (equal counts), the rows
  // of L_N give K x_{S_B} = s_{L_N} - A[L_N, S_N] x_{S_N} with K = A[L_N, S_B].
  void reinvert() {
    since_reinvert_ = 0;
    std::vector<std::size_t> sb_pos, ln_pos;  // positions in basic_ / nonbasic_
    for (std::size_t r = 0; r < M_; ++r) {
      if (basic_[r] < n_) sb_pos.push_back(r);
    }
    for (std::size_t c = 0; c < n_; ++c) {
      if (nonbasic_[c] >= n_) ln_pos.push_back(c);
    }
    const std::size_t k = sb_pos.size();
    if (ln_pos.size() != k) throw NumericalError("solve_lp: inconsistent basis during refactorisation");

    DenseMatrix K(k, k), X(k, n_);
    for (std::size_t p = 0; p < k; ++p) {
      const auto arow = lp_.row(nonbasic_[ln_pos[p]] - n_);
      for (std::size_t q = 0; q < k; ++q) K(p, q) = arow[basic_[sb_pos[q]]];
      for (std::size_t c = 0; c < n_; ++c) {
        const std::size_t var = nonbasic_[c];
        X(p, c) = var >= n_ ? (c == ln_pos[p] ? 1.0 : 0.0) : -arow[var];
      }
    }
    solve_in_place(K, X);

    std::vector<std::size_t> sb_index(n_, k);  // structural -> row of X
    for (std::size_t q = 0; q < k; ++q) sb_index[basic_[sb_pos[q]]] = q;
    for (std::size_t r = 0; r < M_; ++r) {
      auto trow = T_.row(r);
      const std::size_t b = basic_[r];
      if (b < n_) {
        const auto xr = X.row(sb_index[b]);
        std::copy(xr.begin(), xr.end(), trow.begin());
        continue;
      }
      const auto arow = lp_.row(b - n_);
      std::fill(trow.begin(), trow.end(), 0.0);
      for (std::size_t c = 0; c < n_; ++c) {
        if (nonbasic_[c] < n_) trow[c] = arow[nonbasic_[c]];
      }
      for (std::size_t q = 0; q < k; ++q) {
        const double a = arow[basic_[sb_pos[q]]];
        if (a != 0.0) simd::axpy(a, X.row(q), trow);
      }
    }
    recompute_basic_values();
  }

  // Gaussian elimination with partial pivoting; overwrites X with K^{-1} X.
  static void solve_in_place(DenseMatrix& K, DenseMatrix& X) {
    const std::size_t k = K.rows();
    double scale = 0.0;
    for (double v : K.data()) scale = std::max(scale, std::fabs(v));
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < k; ++i) {
        if (std::fabs(K(i, col)) > std::fabs(K(piv, col))) piv = i;
      }
      if (std::fabs(K(piv, col)) <= 1e-13 * std::max(scale, 1.0)) {
        throw NumericalError("solve_lp: singular basis during refactorisation");
      }
      if (piv != col) {
        std::swap_ranges(K.row(col).begin(), K.row(col).end(), K.row(piv).begin());
        std::swap_ranges(X.row(col).begin(), X.row(col).end(), X.row(piv).begin());
      }
      const double p = K(col, col);
      for (std::size_t i = col + 1; i < k; ++i) {
        const double f = K(i, col) / p;
        if (f == 0.0) continue;
        simd::axpy(-f, K.row(col), K.row(i));
        simd::axpy(-f, X.row(col), X.row(i));
      }
    }
    for (std::size_t col = k; col-- > 0;) {
      const double p = K(col, col);
      for (double& v : X.row(col)) v /= p;
      for (std::size_t i = 0; i < col; ++i) {
        const double f = K(i, col);
        if (f != 0.0) simd::axpy(-f, X.row(col), X.row(i));
      }
    }
  }

  LpResult finish(LpStatus status) {
    LpResult res;
    res.status = status;
    res.iterations = iterations_;
    if (status != LpStatus::Optimal) return res;

    res.argmax = DenseVec(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) res.argmax[j] = value_[j];
    res.value = simd::dot(lp_.objective(), res.argmax.span());

    std::vector<double> d;
    reduced_costs(false, d);
    res.row_duals.assign(M_, 0.0);
    res.reduced_costs.assign(n_, 0.0);
    for (std::size_t c = 0; c < n_; ++c) {
      const std::size_t var = nonbasic_[c];
      if (var < n_) res.reduced_costs[var] = d[c];
      else res.row_duals[var - n_] = d[c];
    }
    return res;
  }

  const LinearProgram& lp_;
  LpOptions opts_;
  std::size_t n_ = 0, M_ = 0;
  std::vector<double> lo_, hi_, cost_, value_;
  std::vector<std::size_t> basic_, nonbasic_;
  DenseMatrix T_;
  std::size_t iterations_ = 0, since_reinvert_ = 0, max_iter_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  return BoundedSimplex(lp, opts).run();
}

CertificateReport check_certificate(const LinearProgram& lp, const LpResult& res) {
  if (res.status != LpStatus::Optimal) throw std::invalid_argument("check_certificate: result is not optimal");
  CertificateReport rep;
  const std::size_t n = lp.num_vars();
  const auto& x = res.argmax;

  std::vector<double> grad(lp.objective());
  double dual_obj = 0.0;
  auto side_terms = [&](double mult, double act, double lo, double hi) {
    rep.primal_infeasibility = std::max({rep.primal_infeasibility, lo - act, act - hi});
    if (mult > 0.0) {
      if (!std::isfinite(hi)) rep.sign_violation = std::max(rep.sign_violation, mult);
      else {
        rep.complementary_slackness = std::max(rep.complementary_slackness, mult * std::fabs(hi - act));
        dual_obj += mult * hi;
      }
    } else if (mult < 0.0) {
      if (!std::isfinite(lo)) rep.sign_violation = std::max(rep.sign_violation, -mult);
      else {
        rep.complementary_slackness = std::max(rep.complementary_slackness, -mult * std::fabs(act - lo));
        dual_obj += mult * lo;
      }
    }
  };
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const auto row = lp.row(i);
    side_terms(res.row_duals[i], simd::dot(row, x.span()), lp.row_lower(i), lp.row_upper(i));
    if (res.row_duals[i] != 0.0) simd::axpy(-res.row_duals[i], row, grad);
  }
  for (std::size_t j = 0; j < n; ++j) {
    side_terms(res.reduced_costs[j], x[j], lp.lower(j), lp.upper(j));
    grad[j] -= res.reduced_costs[j];
    rep.stationarity = std::max(rep.stationarity, std::fabs(grad[j]));
  }
  rep.duality_gap = std::fabs(res.value - dual_obj);
  return rep;
}

}  // namespace l1dual
