#include <doctest.h>

#include <cmath>
#include <random>

#include "l1dual/experiments.hpp"
#include "l1dual/polytope.hpp"
#include "test_util.hpp"

using namespace l1dual;

namespace {

SlabSystem random_slabs(std::mt19937_64& rng, int m, std::size_t n, double rho, bool box) {
  SlabSystem s;
  s.m = m;
  s.half_width = rho;
  s.box = box;
  for (std::size_t k = 0; k < n; ++k) s.normals.push_back(testutil::uniform_vec(rng, static_cast<std::size_t>(m)));
  return s;
}

}  // namespace

TEST_CASE("double description agrees with the brute-force oracle (m <= 3)") {
  std::mt19937_64 rng(31);
  for (int m = 1; m <= 3; ++m) {
    for (bool box : {false, true}) {
      for (int t = 0; t < 15; ++t) {
        const std::size_t n = static_cast<std::size_t>(m) + 1 + t % 5;
        const SlabSystem s = random_slabs(rng, m, n, 0.3 + 0.1 * t, box);
        const VertexSet dd = vertex_enumerate(s, n);
        const VertexSet bf = vertex_enumerate_brute_force(s, n);
        CAPTURE(m);
        CAPTURE(box);
        CAPTURE(t);
        CHECK(dd.bounded == bf.bounded);
        CHECK(dd.size() == bf.size());
        CHECK(same_vertices(dd, bf));
      }
    }
  }
}

TEST_CASE("fewer normals than the dimension leave the region unbounded") {
  const RowFamily rows = gen_rows_trig(4);
  const SlabSystem s = SlabSystem::from_rows(rows, 1.0, 3);
  const VertexSet v = vertex_enumerate(s, 3);
  CHECK_FALSE(v.bounded);
  CHECK(v.size() == 0);
  // The box alone makes it bounded.
  const SlabSystem b = SlabSystem::from_rows(rows, 1.0, 3, true);
  CHECK(vertex_enumerate(b, 3).bounded);
}

TEST_CASE("a square: two orthogonal slabs give four vertices") {
  SlabSystem s;
  s.m = 2;
  s.half_width = 1.0;
  s.normals = {{1.0, 0.0}, {0.0, 2.0}};
  const VertexSet v = vertex_enumerate(s, 2);
  REQUIRE(v.bounded);
  REQUIRE(v.size() == 4);
  for (const auto& p : v.vertices) {
    CHECK(std::fabs(p[0]) == doctest::Approx(1.0));
    CHECK(std::fabs(p[1]) == doctest::Approx(0.5));
  }
}

TEST_CASE("incremental sweep matches one-shot enumeration") {
  const RowFamily rows = gen_rows_trig(4);
  SlabVertexSweep sweep(4, 1.0, false);
  const SlabSystem all = SlabSystem::from_rows(rows, 1.0, 12);
  for (std::size_t n = 1; n <= 12; ++n) {
    sweep.add_slab(all.normals[n - 1]);
    const VertexSet once = vertex_enumerate(all, n);
    CHECK(sweep.bounded() == once.bounded);
    CHECK(sweep.vertex_count() == once.size());
    CHECK(same_vertices(sweep.vertices(), once));
  }
}

TEST_CASE("vertex counts of the m = 12 trig region at n = 14") {
  const RowFamily rows = gen_rows_trig(12);
  const auto counts = vertex_counts(rows, 1.0, 14);
  REQUIRE(counts.size() == 14);
  CHECK_FALSE(counts[10].bounded);
  CHECK(counts[13].bounded);
  CHECK(counts[13].count == 10256);
}

TEST_CASE("SlabSystem validation") {
  SlabSystem s;
  s.m = 2;
  s.half_width = -1.0;
  s.normals = {{1.0, 0.0}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.half_width = 1.0;
  s.normals = {{1.0}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("dual_lp encodes the box and the slabs") {
  const RowFamily rows = gen_rows_trig(4);
  const DenseVec y0{1.0, 0.5, -0.2, 0.1};
  const LinearProgram boxed = dual_lp(rows, y0, 0.7, 9, true);
  CHECK(boxed.num_rows() == 9);
  CHECK(boxed.lower(0) == -1.0);
  CHECK(boxed.row_upper(3) == 0.7);
  CHECK(boxed.row(2)[1] == doctest::Approx(rows(2, 3)));
  const LinearProgram open = dual_lp(rows, y0, 0.7, 9, false);
  CHECK(std::isinf(open.upper(0)));
}

TEST_CASE("objective stabilisation: S(l) nonincreasing and certified") {
  const RowFamily rows = gen_rows_trig(8);
  const TruthAndData td = gen_truth_and_data(rows);
  const DenseVec y0 = add_noise(td.y, 1e-3, 3);
  const N0ByObjective r = find_n0_by_objective(rows, y0, 0.05, 8);
  CHECK(r.nonincreasing);
  REQUIRE(r.sweep.size() >= 3);
  const auto& last = r.sweep.back();
  CHECK(r.n0 == r.sweep[r.sweep.size() - 3].l);
  CHECK(r.sweep[r.sweep.size() - 3].certified);
  for (std::size_t i = 1; i < r.sweep.size(); ++i) CHECK(r.sweep[i].S <= r.sweep[i - 1].S * (1 + 1e-9));
  CHECK(last.S == doctest::Approx(r.sweep[r.sweep.size() - 3].S).epsilon(1e-9));
}

TEST_CASE("n0 search hits its cap with an explicit error") {
  const RowFamily rows = gen_rows_trig(12);
  N0VertexOptions o;
  o.n_cap = 15;
  CHECK_THROWS_AS(find_n0_by_vertices(rows, 1.0, 12, o), NumericalError);
}
