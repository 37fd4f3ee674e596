#include <doctest.h>

#include <string>

#include "l1dual/manifest.hpp"

using namespace l1dual;

namespace {

const char* kValid = R"({
  "name": "t", "m": 12, "generator": "trig", "seed": 5, "noise_factor": 0.001,
  "rho_list": [1, 0.5],
  "n0": {"strategy": "objective", "start": 12, "cap": 100},
  "err_baseline": "noisy",
  "tolerances": {"peak": 1e-5, "fppa_tol": 1e-9, "fppa_max_iter": 1000, "lp_feasibility": 1e-8},
  "output": "t.csv", "verbosity": 2
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kValid;
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("a valid manifest fills every field") {
  const Manifest mf = parse_manifest(kValid);
  const auto& c = mf.config;
  CHECK(c.name == "t");
  CHECK(c.m == 12);
  CHECK(c.seed == 5);
  CHECK(c.rho_list == std::vector<double>{1.0, 0.5});
  CHECK(c.n0.kind == N0Kind::Objective);
  CHECK(c.n0.start == 12);
  CHECK(c.n0.cap == 100);
  CHECK(c.err_baseline == ErrBaseline::Noisy);
  CHECK(c.solve.peak_tol == 1e-5);
  CHECK(c.solve.fppa_max_iter == 1000);
  CHECK(c.solve.lp.feasibility_tol == 1e-8);
  CHECK(mf.output == "t.csv");
  CHECK(mf.verbosity == 2);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS(parse_manifest("{ not json"), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"name\": \"t\"", "\"nmae\": \"t\"")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"m\": 12", "\"m\": \"12\"")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"m\": 12", "\"m\": 13")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("[1, 0.5]", "[]")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("[1, 0.5]", "[1, -0.5]")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"objective\"", "\"guess\"")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"noisy\"", "\"dirty\"")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"generator\": \"trig\"", "\"generator\": \"haar\"")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"seed\": 5", "\"seed\": -5")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"peak\": 1e-5", "\"peak\": 2")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"fppa_max_iter\": 1000", "\"fppa_max_iter\": 0")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(with("\"cap\": 100", "\"cap\": 100, \"extra\": 1")), ManifestError);
  CHECK_THROWS_AS(parse_manifest(R"({"m": 4, "rho_list": [1]})"), ManifestError);
}

TEST_CASE("missing file is a manifest error") {
  CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"), ManifestError);
}

TEST_CASE("shipped manifests load") {
  for (const char* name : {"m12.json", "m200.json", "m600.json", "identity_toy.json"}) {
    CAPTURE(name);
    const Manifest mf = load_manifest(std::string(L1DUAL_MANIFEST_DIR) + "/" + name);
    CHECK(!mf.config.rho_list.empty());
  }
}
