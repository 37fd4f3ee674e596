#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/operators.hpp"
#include "l1dual/pipeline.hpp"

namespace l1dual {

/// a_{j,k} = cos(jk)/k and a_{j+m/2,k} = sin(jk)/k for j <= m/2; envelope 1/k.
RowFamily gen_rows_trig(int m);

/// Coordinate sampling a_j = e_j (envelope 1 up to m, 0 after).
RowFamily gen_rows_identity(int m);

/// Builds a family from a generator id ("trig" or "identity").
RowFamily make_rows(const std::string& generator, int m);

struct TruthAndData {
  std::function<double(std::int64_t)> x0;  // x0_k = 1/(10k^2)
  DenseVec y;                              // A x0
  std::int64_t terms = 0;                  // series terms summed
  double tail_bound = 0.0;                 // certified bound on the dropped tail
};

/// y_j = sum_k a_{j,k} / (10 k^2) by compensated summation, truncated where
/// the envelope bound on the tail falls below tail_tol.
TruthAndData gen_truth_and_data(const RowFamily& rows, double tail_tol = 1e-12);

/// Upper bound on sum_{k>K} envelope(k) / (10 k^2).
double truth_tail_bound(const RowFamily& rows, std::int64_t K);

/// y + eta with eta_i ~ N(0, sigma^2), sigma = noise_factor * (max y - min y),
/// drawn from a 64-bit Mersenne twister seeded with seed.
DenseVec add_noise(const DenseVec& y, double noise_factor, std::uint64_t seed);

enum class ErrBaseline { Clean, Noisy };

struct ExperimentConfig {
  std::string name = "experiment";
  int m = 12;
  std::string generator = "trig";
  std::vector<double> rho_list;
  std::uint64_t seed = 0;
  double noise_factor = 1e-3;
  N0Strategy n0;
  ErrBaseline err_baseline = ErrBaseline::Clean;
  bool compute_err = true;
  SolveOptions solve;

  void validate() const;
};

/// Rows, clean data y and noisy data y0 of a config.
struct ExperimentData {
  RowFamily rows;
  DenseVec y;
  DenseVec y0;
};

ExperimentData make_experiment_data(const ExperimentConfig& config);

/// The config's n0 strategy applied to its data. A search rho of 0 means
/// min(rho_list) for the objective strategy and 1 otherwise.
N0Resolution resolve_config_n0(const ExperimentConfig& config, const ExperimentData& data);

struct TableRow {
  double rho = 0.0;
  double rho_lambda_inf = 0.0;
  double astar_sup = 0.0;
  double S = 0.0;
  double f_r = 0.0;
  std::int64_t SL = 0;
  double err = 0.0;            // ||x_hat - x_dagger||_2 (NaN when not computed)
  double residual_clean = 0.0; // ||y - A x_hat||_2
  double residual_noisy = 0.0; // ||y0 - A x_hat||_2
  Branch branch = Branch::ZeroSolution;
  double fppa_objective = 0.0;
  double lp_objective = 0.0;
  std::string solver_used;
  std::string error;           // non-empty when the row failed
  SparseSeq x;
  DenseVec lambda;
  std::vector<std::int64_t> peak;
};

struct TableResult {
  ExperimentConfig config;
  std::int64_t n0 = 0;
  std::vector<ObjectivePoint> n0_sweep;  // objective strategy only
  DenseVec y, y0;
  double y0_l1 = 0.0;
  std::optional<InterpResult> interp;
  std::vector<TableRow> rows;
};

/// Solves every rho of the config. n0 is resolved once before the sweep and
/// the noise is drawn once, so the rows are independent; jobs > 1 runs them
/// on a thread pool with identical results.
TableResult run_table(const ExperimentConfig& config, unsigned jobs = 1);

/// Table number: 4 decimals, or 4-digit scientific below 1e-3.
std::string format_table_number(double v);

/// Human table as RFC 4180 CSV with a fixed header.
void write_table_csv(const TableResult& t, std::ostream& out);
/// Full-precision JSON sidecar (round-trip exact doubles).
void write_table_json(const TableResult& t, std::ostream& out);
std::string table_json(const TableResult& t);

/// Solution file: header "index,value", one row per stored entry, values
/// printed with 17 significant digits so reading back is exact.
void write_sequence_csv(const SparseSeq& x, std::ostream& out);
/// Inverse of write_sequence_csv; throws std::invalid_argument on malformed input.
SparseSeq read_sequence_csv(std::istream& in);

}  // namespace l1dual
