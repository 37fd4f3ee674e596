#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "l1dual/experiments.hpp"

using namespace l1dual;

TEST_CASE("truth data: tail bound and agreement with a long direct sum") {
  const RowFamily rows = gen_rows_trig(4);
  const TruthAndData td = gen_truth_and_data(rows);
  CHECK(td.tail_bound < 1e-12);
  CHECK(td.x0(3) == doctest::Approx(1.0 / 90.0));
  for (int j = 1; j <= 4; ++j) {
    long double s = 0.0L;
    for (std::int64_t k = 1; k <= 2'000'000; ++k) s += static_cast<long double>(rows(j, k)) / (10.0L * k * k);
    // The direct sum stops at 2e6 terms; its own tail is below 1/(20 * 2e6^2) ~ 1.25e-14.
    CHECK(std::fabs(static_cast<double>(s) - td.y[static_cast<std::size_t>(j - 1)]) <= 2e-12);
  }
  CHECK(truth_tail_bound(rows, 100) == doctest::Approx(1.0 / (20.0 * 100.0 * 100.0)).epsilon(0.02));
}

TEST_CASE("noise is seeded and has the requested scale") {
  DenseVec y(100'000, 0.0);
  y[0] = 1.0;  // range 1, so sigma = noise_factor
  const DenseVec a = add_noise(y, 0.01, 42);
  const DenseVec b = add_noise(y, 0.01, 42);
  CHECK(a == b);
  CHECK_FALSE(a == add_noise(y, 0.01, 43));
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) mean += a[i];
  mean /= static_cast<double>(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) var += (a[i] - mean) * (a[i] - mean);
  const double sd = std::sqrt(var / static_cast<double>(a.size() - 2));
  CHECK(std::fabs(sd - 0.01) <= 0.02 * 0.01);
  CHECK(add_noise(y, 0.0, 1) == y);
}

TEST_CASE("table number formatting") {
  CHECK(format_table_number(12.0) == "12.0000");
  CHECK(format_table_number(0.0) == "0.0000");
  CHECK(format_table_number(0.00155499) == "0.0016");
  CHECK(format_table_number(5.9779e-4) == "5.9779e-04");
  CHECK(format_table_number(-2.5e-7) == "-2.5000e-07");
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.rho_list = {1.0};
  c.n0 = N0Strategy::fixed(10);
  CHECK_NOTHROW(c.validate());
  c.rho_list.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rho_list = {0.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rho_list = {1.0};
  c.m = 7;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.m = 6;
  c.n0 = N0Strategy::fixed(0);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.m = 6;
  c.seed = 11;
  c.rho_list = {20.0, 1.0, 0.2, 0.05, 0.005};
  c.n0 = N0Strategy::objective();
  return c;
}

}  // namespace

TEST_CASE("run_table rows, CSV layout and invariants") {
  const TableResult t = run_table(small_config());
  REQUIRE(t.rows.size() == 5);
  CHECK(t.interp.has_value());
  std::int64_t prev_sl = -1;
  for (auto it = t.rows.rbegin(); it != t.rows.rend(); ++it) {
    CHECK(it->error.empty());
    CHECK(std::fabs(it->f_r - it->S) / std::max(it->S, 1e-6) <= 5e-3);
    CHECK((it->SL == 0) == (it->branch == Branch::ZeroSolution));
    if (prev_sl >= 0) CHECK(it->SL <= prev_sl);
    prev_sl = it->SL;
  }
  CHECK(t.rows[0].branch == Branch::ZeroSolution);
  CHECK(t.rows[0].f_r == doctest::Approx(t.y0_l1).epsilon(1e-12));

  std::ostringstream csv;
  write_table_csv(t, csv);
  const std::string s = csv.str();
  CHECK(s.rfind("rho,rho_lambda_inf,astar_sup,S,f_r,SL,ERR,residual_clean_l2,residual_noisy_l2,branch,error\r\n", 0) == 0);
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = s.find("\r\n", p)) != std::string::npos; p += 2) ++lines;
  CHECK(lines == 6);
  CHECK(s.find("20.0000,") != std::string::npos);
}

TEST_CASE("parallel rows give identical output") {
  const ExperimentConfig c = small_config();
  CHECK(table_json(run_table(c, 1)) == table_json(run_table(c, 4)));
}

TEST_CASE("JSON sidecar round-trips doubles exactly") {
  const TableResult t = run_table(small_config());
  const auto j = nlohmann::json::parse(table_json(t));
  CHECK(j.at("n0").get<std::int64_t>() == t.n0);
  REQUIRE(j.at("rows").size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(j["rows"][i]["S"].get<double>() == t.rows[i].S);
    CHECK(j["rows"][i]["f_r"].get<double>() == t.rows[i].f_r);
  }
}

TEST_CASE("solution CSV round trip reproduces f_r") {
  const ExperimentConfig c = small_config();
  const TableResult t = run_table(c);
  const TableRow& row = t.rows[3];
  std::stringstream ss;
  write_sequence_csv(row.x, ss);
  const SparseSeq back = read_sequence_csv(ss);
  CHECK(back == row.x);
  const RowFamily rows = gen_rows_trig(c.m);
  const DenseVec ax = apply_A(rows, back);
  double f = row.rho * l1_norm(back);
  for (std::size_t i = 0; i < ax.size(); ++i) f += std::fabs(t.y0[i] - ax[i]);
  CHECK(f == doctest::Approx(row.f_r).epsilon(1e-14));

  std::istringstream bad("index,value\r\n3,abc\r\n");
  CHECK_THROWS_AS(read_sequence_csv(bad), std::invalid_argument);
  std::istringstream nohdr("1,2\r\n");
  CHECK_THROWS_AS(read_sequence_csv(nohdr), std::invalid_argument);
}

TEST_CASE("make_rows rejects unknown generators") {
  CHECK(make_rows("identity", 3).m() == 3);
  CHECK_THROWS_AS(make_rows("wavelet", 4), std::invalid_argument);
}
