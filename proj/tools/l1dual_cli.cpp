#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "l1dual/experiments.hpp"
#include "l1dual/manifest.hpp"
#include "l1dual/pipeline.hpp"
#include "l1dual/polytope.hpp"

using namespace l1dual;
using nlohmann::json;

namespace {

struct Common {
  std::string manifest;
  bool json_out = false;
  std::optional<double> rho;
  std::optional<std::int64_t> n0;
  std::optional<double> peak_tol, tie_tol, fppa_tol, lp_feas, lp_opt;
  std::optional<std::int64_t> fppa_max_iter;
  bool no_lp_oracle = false;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_rho, bool with_tols) {
  cmd->add_option("-m,--manifest", c.manifest, "experiment manifest (JSON)")->required();
  cmd->add_flag("--json", c.json_out, "machine-readable report on stdout");
  if (with_rho) cmd->add_option("--rho", c.rho, "regularization parameter (default: first of rho_list)");
  if (with_tols) {
    cmd->add_option("--n0", c.n0, "use this constraint count instead of the manifest strategy");
    cmd->add_option("--peak-tol", c.peak_tol, "relative peak-set tolerance (default 1e-6)");
    cmd->add_option("--tie-tol", c.tie_tol, "relative tie tolerance of the zero-solution test (default 1e-9)");
    cmd->add_option("--fppa-tol", c.fppa_tol, "FPPA relative stopping tolerance (default 1e-10)");
    cmd->add_option("--fppa-max-iter", c.fppa_max_iter, "FPPA iteration cap (default 200000)");
    cmd->add_option("--lp-feasibility", c.lp_feas, "simplex feasibility tolerance (default 1e-9)");
    cmd->add_option("--lp-optimality", c.lp_opt, "simplex optimality tolerance (default 1e-9)");
    cmd->add_flag("--no-lp-oracle", c.no_lp_oracle, "skip the LP cross-check of the finite solve");
  }
}

Manifest load(const Common& c) {
  Manifest mf = load_manifest(c.manifest);
  SolveOptions& s = mf.config.solve;
  if (c.peak_tol) s.peak_tol = *c.peak_tol;
  if (c.tie_tol) s.tie_tol = *c.tie_tol;
  if (c.fppa_tol) s.fppa_tol = *c.fppa_tol;
  if (c.fppa_max_iter) {
    if (*c.fppa_max_iter < 1) throw std::invalid_argument("--fppa-max-iter must be >= 1");
    s.fppa_max_iter = static_cast<std::size_t>(*c.fppa_max_iter);
  }
  if (c.lp_feas) s.lp.feasibility_tol = *c.lp_feas;
  if (c.lp_opt) s.lp.optimality_tol = *c.lp_opt;
  if (c.no_lp_oracle) s.lp_oracle = false;
  if (!(s.peak_tol > 0.0 && s.peak_tol < 1.0)) throw std::invalid_argument("--peak-tol must lie in (0, 1)");
  if (!(s.fppa_tol > 0.0)) throw std::invalid_argument("--fppa-tol must be positive");
  if (!(s.lp.feasibility_tol > 0.0 && s.lp.optimality_tol > 0.0)) {
    throw std::invalid_argument("LP tolerances must be positive");
  }
  if (c.n0) {
    if (*c.n0 < 1) throw std::invalid_argument("--n0 must be >= 1");
    mf.config.n0 = N0Strategy::fixed(*c.n0);
  }
  return mf;
}

double pick_rho(const Common& c, const Manifest& mf) {
  const double rho = c.rho ? *c.rho : mf.config.rho_list.front();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be a positive finite number");
  return rho;
}

void note(const Manifest& mf, const std::string& msg) {
  if (mf.verbosity >= 2) std::cerr << "[l1dual] " << msg << '\n';
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json index_list(const std::vector<std::int64_t>& v) { return json(v); }

std::string join(const std::vector<std::int64_t>& v, std::size_t limit = 40) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) os << (i ? " " : "") << v[i];
  if (v.size() > limit) os << " ... (" << v.size() << " total)";
  return os.str();
}

std::string default_output(const Manifest& mf, const std::string& suffix) {
  return mf.output.empty() ? mf.config.name + suffix : mf.output;
}

std::int64_t resolve(const Manifest& mf, const ExperimentData& data) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t n0 = resolve_config_n0(mf.config, data).n0;
  note(mf, "n0 = " + std::to_string(n0) + " (" + to_string(mf.config.n0.kind) + ", " +
               fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s)");
  return n0;
}

int cmd_dual(const Common& c) {
  const Manifest mf = load(c);
  const double rho = pick_rho(c, mf);
  const ExperimentData data = make_experiment_data(mf.config);
  const RegularizationProblem prob{data.rows, data.y0, rho, 1.0};
  prob.validate();
  const DualSolution d = solve_dual_fixed(prob, resolve(mf, data), mf.config.solve);
  const double lam_inf = sup_norm(d.lambda);
  if (c.json_out) {
    json j = {{"rho", rho},
              {"n0", d.n0},
              {"S", d.S},
              {"lambda", d.lambda.values()},
              {"lambda_inf", lam_inf},
              {"rho_lambda_inf", rho * lam_inf},
              {"astar_sup", d.astar_sup()},
              {"peak", index_list(d.peak)},
              {"certified_feasible", d.certified_feasible},
              {"lp_iterations", d.lp.iterations}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "rho                " << fmt(rho) << '\n'
              << "n0                 " << d.n0 << '\n'
              << "S                  " << fmt(d.S) << '\n'
              << "||lambda||_inf     " << fmt(lam_inf) << '\n'
              << "rho ||lambda||_inf " << fmt(rho * lam_inf) << '\n'
              << "||A_* lambda||_inf " << fmt(d.astar_sup()) << '\n'
              << "peak set           " << join(d.peak) << '\n'
              << "certified feasible " << (d.certified_feasible ? "yes" : "no") << '\n';
  }
  return 0;
}

int cmd_solve(const Common& c) {
  const Manifest mf = load(c);
  const double rho = pick_rho(c, mf);
  const ExperimentData data = make_experiment_data(mf.config);
  const RegularizationProblem prob{data.rows, data.y0, rho, 1.0};
  prob.validate();
  const std::int64_t n0 = resolve(mf, data);
  const PrimalSolution ps = recover_primal(prob, solve_dual_fixed(prob, n0, mf.config.solve), mf.config.solve);

  const std::string path = c.out.empty() ? default_output(mf, "_x.csv") : c.out;
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + path + "'");
    write_sequence_csv(ps.x, f);
  }
  if (c.json_out) {
    json diag = json::object();
    for (const auto& [k, v] : ps.diagnostics) diag[k] = std::isfinite(v) ? json(v) : json(nullptr);
    json j = {{"rho", rho},         {"branch", to_string(ps.branch)}, {"SL", ps.sparsity},
              {"f_r", ps.f_r},      {"S", ps.dual.S},                 {"solver", ps.solver_used},
              {"support", index_list(ps.x.support())}, {"x_file", path}, {"diagnostics", diag}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "rho      " << fmt(rho) << '\n'
              << "branch   " << to_string(ps.branch) << '\n'
              << "SL       " << ps.sparsity << '\n'
              << "f_r      " << fmt(ps.f_r) << '\n'
              << "S        " << fmt(ps.dual.S) << '\n'
              << "solver   " << ps.solver_used << '\n'
              << "support  " << join(ps.x.support()) << '\n'
              << "x written to " << path << '\n';
    for (const auto& [k, v] : ps.diagnostics) std::cout << "  " << k << " = " << fmt(v) << '\n';
  }
  return 0;
}

int cmd_vertices(const Common& c, std::int64_t n_min, std::int64_t n_max, bool box, bool find_n0) {
  const Manifest mf = load(c);
  double rho = c.rho ? *c.rho : (mf.config.n0.rho > 0.0 ? mf.config.n0.rho : 1.0);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be a positive finite number");
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("need 1 <= --n-min <= --n-max");
  const RowFamily rows = make_rows(mf.config.generator, mf.config.m);
  N0VertexOptions vo;
  vo.box = box;
  const auto counts = vertex_counts(rows, rho, n_max, vo);
  std::optional<N0ByVertices> n0;
  if (find_n0) {
    if (mf.config.n0.cap > 0) vo.n_cap = mf.config.n0.cap;
    n0 = find_n0_by_vertices(rows, rho, mf.config.n0.start > 0 ? mf.config.n0.start : mf.config.m, vo);
  }
  if (c.json_out) {
    json arr = json::array();
    for (const auto& vc : counts) {
      if (vc.n < n_min) continue;
      arr.push_back({{"n", vc.n}, {"bounded", vc.bounded}, {"count", vc.bounded ? json(vc.count) : json(nullptr)}});
    }
    json j = {{"rho", rho}, {"box", box}, {"counts", arr}};
    if (n0) j["n0"] = n0->n0;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "n,count\r\n";
    for (const auto& vc : counts) {
      if (vc.n < n_min) continue;
      std::cout << vc.n << ',' << (vc.bounded ? std::to_string(vc.count) : std::string("unbounded")) << "\r\n";
    }
    if (n0) std::cerr << "n0 = " << n0->n0 << " (" << n0->final_count << " vertices)\n";
  }
  return 0;
}

int cmd_table(const Common& c, unsigned jobs) {
  const Manifest mf = load(c);
  const auto t0 = std::chrono::steady_clock::now();
  const TableResult t = run_table(mf.config, jobs);
  note(mf, "table done in " + fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
  const std::string csv_path = c.out.empty() ? default_output(mf, ".csv") : c.out;
  std::string json_path = csv_path;
  if (json_path.size() > 4 && json_path.substr(json_path.size() - 4) == ".csv") json_path.resize(json_path.size() - 4);
  json_path += ".json";
  {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + csv_path + "'");
    write_table_csv(t, f);
  }
  {
    std::ofstream f(json_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + json_path + "'");
    write_table_json(t, f);
  }
  if (c.json_out) {
    write_table_json(t, std::cout);
  } else {
    std::cout << "# " << mf.config.name << ": m = " << mf.config.m << ", n0 = " << t.n0 << ", ||y0||_1 = " << fmt(t.y0_l1)
              << '\n';
    write_table_csv(t, std::cout);
    std::cout << "# written " << csv_path << " and " << json_path << '\n';
  }
  bool any_failed = false;
  for (const auto& r : t.rows) any_failed = any_failed || !r.error.empty();
  return any_failed ? 1 : 0;
}

int cmd_interp(const Common& c, const std::string& which) {
  const Manifest mf = load(c);
  if (which != "clean" && which != "noisy") throw std::invalid_argument("--data must be clean or noisy");
  const ExperimentData data = make_experiment_data(mf.config);
  InterpOptions io;
  io.peak_tol = mf.config.solve.peak_tol;
  io.lp = mf.config.solve.lp;
  const InterpResult r = solve_min_norm_interp(data.rows, which == "clean" ? data.y : data.y0, io);
  if (c.json_out) {
    json entries = json::array();
    for (const auto& e : r.x.entries()) entries.push_back({e.index, e.value});
    json j = {{"data", which},     {"norm", r.norm},   {"dual_value", r.dual_value}, {"n0", r.n0},
              {"peak", r.peak},    {"retried", r.retried}, {"x", entries}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "data           " << which << '\n'
              << "||x||_1        " << fmt(r.norm) << '\n'
              << "dual value     " << fmt(r.dual_value) << '\n'
              << "n0             " << r.n0 << '\n'
              << "support size   " << r.x.nnz() << '\n'
              << "peak set       " << join(r.peak) << '\n'
              << "retried        " << (r.retried ? "yes" : "no") << '\n';
    for (const auto& e : r.x.entries()) std::cout << "  x[" << e.index << "] = " << fmt(e.value) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1dual: duality solver for l1-regularized fitting in l1(N)"};
  app.require_subcommand(1);

  Common dual_c, solve_c, vert_c, table_c, interp_c;
  auto* dual = app.add_subcommand("dual", "solve the dual LP and report lambda, S and the peak set");
  add_common(dual, dual_c, true, true);

  auto* solve = app.add_subcommand("solve", "full primal solve; writes x as an (index,value) CSV");
  add_common(solve, solve_c, true, true);
  solve->add_option("-o,--out", solve_c.out, "solution CSV path");

  std::int64_t n_min = 1, n_max = 20;
  bool box = false, find_n0 = false;
  auto* vert = app.add_subcommand("vertices", "vertex counts of the truncated dual region, as CSV");
  add_common(vert, vert_c, true, false);
  vert->add_option("--n-min", n_min, "first n reported");
  vert->add_option("--n-max", n_max, "last n reported");
  vert->add_flag("--box", box, "include the box |lambda_j| <= 1");
  vert->add_flag("--find-n0", find_n0, "also search for the stabilization point n0");

  unsigned jobs = 1;
  auto* table = app.add_subcommand("table", "sweep rho_list; writes CSV plus a JSON sidecar");
  add_common(table, table_c, false, true);
  table->add_option("-j,--jobs", jobs, "rows solved in parallel")->check(CLI::Range(1u, 256u));
  table->add_option("-o,--out", table_c.out, "CSV path (sidecar gets .json)");

  std::string which = "clean";
  auto* interp = app.add_subcommand("interp", "minimum-norm interpolation of the manifest data");
  add_common(interp, interp_c, false, true);
  interp->add_option("--data", which, "clean or noisy data")->check(CLI::IsMember({"clean", "noisy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dual) return cmd_dual(dual_c);
    if (*solve) return cmd_solve(solve_c);
    if (*vert) return cmd_vertices(vert_c, n_min, n_max, box, find_n0);
    if (*table) return cmd_table(table_c, jobs);
    if (*interp) return cmd_interp(interp_c, which);
  } catch (const NumericalError& e) {
    std::cerr << "l1dual: numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "l1dual: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "l1dual: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
