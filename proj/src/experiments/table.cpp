#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "l1dual/experiments.hpp"

namespace l1dual {

void ExperimentConfig::validate() const {
  if (m <= 0) throw std::invalid_argument("config: m must be positive");
  if (generator == "trig" && m % 2 != 0) throw std::invalid_argument("config: the trig generator needs an even m");
  if (rho_list.empty()) throw std::invalid_argument("config: rho_list is empty");
  for (double r : rho_list) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("config: every rho must be positive and finite");
  }
  if (!(noise_factor >= 0.0)) throw std::invalid_argument("config: noise_factor must be >= 0");
  if (n0.kind == N0Kind::Fixed && n0.n < 1) throw std::invalid_argument("config: fixed n0 needs n >= 1");
}

namespace {

double l2_residual(const RowFamily& rows, const DenseVec& data, const SparseSeq& x) {
  const DenseVec ax = apply_A(rows, x);
  std::vector<double> r(ax.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = data[i] - ax[i];
  return l2_norm(r);
}

}  // namespace

ExperimentData make_experiment_data(const ExperimentConfig& config) {
  config.validate();
  RowFamily rows = make_rows(config.generator, config.m);
  const TruthAndData td = gen_truth_and_data(rows);
  DenseVec y0 = add_noise(td.y, config.noise_factor, config.seed);
  return {std::move(rows), td.y, std::move(y0)};
}

N0Resolution resolve_config_n0(const ExperimentConfig& config, const ExperimentData& data) {
  N0Strategy strategy = config.n0;
  if (strategy.rho <= 0.0) {
    strategy.rho = strategy.kind == N0Kind::Objective
                       ? *std::min_element(config.rho_list.begin(), config.rho_list.end())
                       : 1.0;
  }
  const RegularizationProblem base{data.rows, data.y0, strategy.rho, 1.0};
  return resolve_n0(base, strategy);
}

TableResult run_table(const ExperimentConfig& config, unsigned jobs) {
  config.validate();
  TableResult out;
  out.config = config;
  const ExperimentData data = make_experiment_data(config);
  const RowFamily& rows = data.rows;
  out.y = data.y;
  out.y0 = data.y0;
  out.y0_l1 = l1_norm(out.y0);

  N0Resolution n0 = resolve_config_n0(config, data);
  out.n0 = n0.n0;
  out.n0_sweep = std::move(n0.objective_sweep);

  if (config.compute_err) {
    out.interp = solve_min_norm_interp(rows, config.err_baseline == ErrBaseline::Clean ? out.y : out.y0);
  }

  out.rows.resize(config.rho_list.size());
  auto solve_row = [&](std::size_t i) {
    TableRow& row = out.rows[i];
    row.rho = config.rho_list[i];
    row.err = std::numeric_limits<double>::quiet_NaN();
    try {
      const RegularizationProblem prob{rows, out.y0, row.rho, 1.0};
      const PrimalSolution ps = recover_primal(prob, solve_dual_fixed(prob, out.n0, config.solve), config.solve);
      row.rho_lambda_inf = row.rho * sup_norm(ps.dual.lambda);
      row.astar_sup = ps.dual.astar_sup();
      row.S = ps.dual.S;
      row.f_r = ps.f_r;
      row.SL = ps.sparsity;
      row.branch = ps.branch;
      row.solver_used = ps.solver_used;
      auto diag = [&](const char* key) {
        auto it = ps.diagnostics.find(key);
        return it == ps.diagnostics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
      };
      row.fppa_objective = diag("fppa_objective");
      row.lp_objective = diag("lp_objective");
      row.x = ps.x;
      row.lambda = ps.dual.lambda;
      row.peak = ps.dual.peak;
      row.residual_clean = l2_residual(rows, out.y, ps.x);
      row.residual_noisy = l2_residual(rows, out.y0, ps.x);
      if (out.interp) row.err = l2_distance(ps.x, out.interp->x);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(out.rows.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < out.rows.size(); ++i) solve_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < out.rows.size(); i = next++) solve_row(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace l1dual
