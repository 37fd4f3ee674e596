#include "l1dual/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace l1dual {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& msg) {
  throw ManifestError(source + ": " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                const std::string& source) {
  if (!obj.is_object()) fail(source, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(source, "unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& obj, const char* key, const std::string& source) {
  const json& v = obj.at(key);
  if (!v.is_number()) fail(source, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t get_int(const json& obj, const char* key, const std::string& source) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(source, std::string("'") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& source) {
  const json& v = obj.at(key);
  if (!v.is_string()) fail(source, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& source) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(source, std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source, std::string("invalid JSON: ") + e.what());
  }
  check_keys(j,
             {"name", "m", "generator", "seed", "noise_factor", "rho_list", "n0", "err_baseline", "compute_err",
              "tolerances", "output", "verbosity"},
             "manifest", source);
  for (const char* req : {"m", "rho_list"}) {
    if (!j.contains(req)) fail(source, std::string("missing required key '") + req + "'");
  }

  Manifest mf;
  mf.source = source;
  ExperimentConfig& c = mf.config;
  if (j.contains("name")) c.name = get_string(j, "name", source);
  const std::int64_t m = get_int(j, "m", source);
  if (m <= 0 || m > 100000) fail(source, "'m' must be a positive integer");
  c.m = static_cast<int>(m);
  if (j.contains("generator")) c.generator = get_string(j, "generator", source);
  if (c.generator != "trig" && c.generator != "identity") {
    fail(source, "'generator' must be \"trig\" or \"identity\"");
  }
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      fail(source, "'seed' must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("noise_factor")) c.noise_factor = get_number(j, "noise_factor", source);

  const json& rl = j.at("rho_list");
  if (!rl.is_array()) fail(source, "'rho_list' must be an array");
  if (rl.empty()) fail(source, "'rho_list' is empty");
  for (const auto& r : rl) {
    if (!r.is_number()) fail(source, "'rho_list' entries must be numbers");
    c.rho_list.push_back(r.get<double>());
  }

  if (j.contains("n0")) {
    const json& n = j.at("n0");
    check_keys(n, {"strategy", "n", "start", "rho", "box", "cap"}, "'n0'", source);
    const std::string strat = n.contains("strategy") ? get_string(n, "strategy", source) : "fixed";
    if (strat == "fixed") c.n0.kind = N0Kind::Fixed;
    else if (strat == "vertices") c.n0.kind = N0Kind::Vertices;
    else if (strat == "objective") c.n0.kind = N0Kind::Objective;
    else fail(source, "'n0.strategy' must be fixed, vertices or objective");
    if (n.contains("n")) c.n0.n = get_int(n, "n", source);
    if (n.contains("start")) c.n0.start = get_int(n, "start", source);
    if (n.contains("rho")) c.n0.rho = get_number(n, "rho", source);
    if (n.contains("box")) c.n0.box = get_bool(n, "box", source);
    if (n.contains("cap")) c.n0.cap = get_int(n, "cap", source);
    if (c.n0.start < 0 || c.n0.cap < 0 || c.n0.rho < 0.0) fail(source, "'n0' fields must be non-negative");
  } else {
    fail(source, "missing required key 'n0'");
  }

  if (j.contains("err_baseline")) {
    const std::string b = get_string(j, "err_baseline", source);
    if (b == "clean") c.err_baseline = ErrBaseline::Clean;
    else if (b == "noisy") c.err_baseline = ErrBaseline::Noisy;
    else fail(source, "'err_baseline' must be \"clean\" or \"noisy\"");
  }
  if (j.contains("compute_err")) c.compute_err = get_bool(j, "compute_err", source);

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t,
               {"peak", "tie", "fppa_tol", "fppa_max_iter", "lp_oracle", "oracle_disagreement", "lp_feasibility",
                "lp_optimality"},
               "'tolerances'", source);
    SolveOptions& s = c.solve;
    if (t.contains("peak")) s.peak_tol = get_number(t, "peak", source);
    if (t.contains("tie")) s.tie_tol = get_number(t, "tie", source);
    if (t.contains("fppa_tol")) s.fppa_tol = get_number(t, "fppa_tol", source);
    if (t.contains("fppa_max_iter")) {
      const std::int64_t it = get_int(t, "fppa_max_iter", source);
      if (it < 1) fail(source, "'fppa_max_iter' must be >= 1");
      s.fppa_max_iter = static_cast<std::size_t>(it);
    }
    if (t.contains("lp_oracle")) s.lp_oracle = get_bool(t, "lp_oracle", source);
    if (t.contains("oracle_disagreement")) s.oracle_disagreement = get_number(t, "oracle_disagreement", source);
    if (t.contains("lp_feasibility")) s.lp.feasibility_tol = get_number(t, "lp_feasibility", source);
    if (t.contains("lp_optimality")) s.lp.optimality_tol = get_number(t, "lp_optimality", source);
    if (!(s.peak_tol > 0.0 && s.peak_tol < 1.0)) fail(source, "'peak' must lie in (0, 1)");
    if (!(s.tie_tol >= 0.0)) fail(source, "'tie' must be >= 0");
    if (!(s.fppa_tol > 0.0)) fail(source, "'fppa_tol' must be positive");
    if (!(s.lp.feasibility_tol > 0.0) || !(s.lp.optimality_tol > 0.0)) fail(source, "LP tolerances must be positive");
  }
  if (j.contains("output")) mf.output = get_string(j, "output", source);
  if (j.contains("verbosity")) mf.verbosity = static_cast<int>(get_int(j, "verbosity", source));

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(source, e.what());
  }
  return mf;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

}  // namespace l1dual
