#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <sstream>

#include <json.hpp>

#include "l1dual/experiments.hpp"

namespace l1dual {

std::string format_table_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  if (v == 0.0 || std::fabs(v) >= 1e-3) std::snprintf(buf, sizeof buf, "%.4f", v);
  else std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

nlohmann::json number(double v) {
  // JSON has no NaN; failed or skipped cells become null.
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void write_table_csv(const TableResult& t, std::ostream& out) {
  out << "rho,rho_lambda_inf,astar_sup,S,f_r,SL,ERR,residual_clean_l2,residual_noisy_l2,branch,error\r\n";
  for (const auto& r : t.rows) {
    out << format_table_number(r.rho) << ',';
    if (!r.error.empty()) {
      out << ",,,,,,,,," << csv_field(r.error) << "\r\n";
      continue;
    }
    out << format_table_number(r.rho_lambda_inf) << ',' << format_table_number(r.astar_sup) << ','
        << format_table_number(r.S) << ',' << format_table_number(r.f_r) << ',' << r.SL << ','
        << (std::isnan(r.err) ? std::string() : format_table_number(r.err)) << ','
        << format_table_number(r.residual_clean) << ',' << format_table_number(r.residual_noisy) << ','
        << to_string(r.branch) << ",\r\n";
  }
}

std::string table_json(const TableResult& t) {
  using nlohmann::json;
  json j;
  const auto& c = t.config;
  j["config"] = {{"name", c.name},
                 {"m", c.m},
                 {"generator", c.generator},
                 {"seed", c.seed},
                 {"noise_factor", c.noise_factor},
                 {"rho_list", c.rho_list},
                 {"n0_strategy", to_string(c.n0.kind)},
                 {"err_baseline", c.err_baseline == ErrBaseline::Clean ? "clean" : "noisy"}};
  j["n0"] = t.n0;
  json sweep = json::array();
  for (const auto& p : t.n0_sweep) {
    sweep.push_back({{"l", p.l}, {"S", p.S}, {"sup_norm", p.sup_norm}, {"certified", p.certified}});
  }
  j["n0_sweep"] = sweep;
  j["y"] = t.y.values();
  j["y0"] = t.y0.values();
  j["y0_l1"] = t.y0_l1;
  if (t.interp) {
    json xs = json::array();
    for (const auto& e : t.interp->x.entries()) xs.push_back({e.index, e.value});
    j["interp"] = {{"n0", t.interp->n0}, {"norm", t.interp->norm}, {"dual_value", t.interp->dual_value},
                   {"retried", t.interp->retried}, {"x", xs}};
  }
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = {{"rho", r.rho}};
    if (!r.error.empty()) {
      row["error"] = r.error;
      rows.push_back(row);
      continue;
    }
    json xs = json::array();
    for (const auto& e : r.x.entries()) xs.push_back({e.index, e.value});
    row.update({{"rho_lambda_inf", number(r.rho_lambda_inf)},
                {"astar_sup", number(r.astar_sup)},
                {"S", number(r.S)},
                {"f_r", number(r.f_r)},
                {"SL", r.SL},
                {"ERR", number(r.err)},
                {"residual_clean_l2", number(r.residual_clean)},
                {"residual_noisy_l2", number(r.residual_noisy)},
                {"branch", to_string(r.branch)},
                {"solver", r.solver_used},
                {"fppa_objective", number(r.fppa_objective)},
                {"lp_objective", number(r.lp_objective)},
                {"peak", r.peak},
                {"lambda", r.lambda.values()},
                {"x", xs}});
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2);
}

void write_table_json(const TableResult& t, std::ostream& out) { out << table_json(t) << '\n'; }

void write_sequence_csv(const SparseSeq& x, std::ostream& out) {
  out << "index,value\r\n";
  char buf[64];
  for (const auto& e : x.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    out << e.index << ',' << buf << "\r\n";
  }
}

SparseSeq read_sequence_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sequence csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,value") throw std::invalid_argument("sequence csv: expected header 'index,value'");
  std::vector<SeqEntry> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("sequence csv: line " + std::to_string(lineno) + " has no comma");
    }
    try {
      std::size_t used = 0;
      const long long k = std::stoll(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("index");
      const std::string vs = line.substr(comma + 1);
      const double v = std::stod(vs, &used);
      if (used != vs.size()) throw std::invalid_argument("value");
      entries.push_back({k, v});
    } catch (const std::exception&) {
      throw std::invalid_argument("sequence csv: cannot parse line " + std::to_string(lineno));
    }
  }
  return SparseSeq(std::move(entries));
}

}  // namespace l1dual
