#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/lp.hpp"
#include "l1dual/operators.hpp"

namespace l1dual {

/// Slabs |g_k . lambda| <= rho in R^m, optionally intersected with the box
/// |lambda_j| <= 1. The region of the first n slabs is U~_n.
struct SlabSystem {
  int m = 0;
  std::vector<std::vector<double>> normals;  // g_k with (g_k)_j = a_{j,k}
  double half_width = 1.0;
  bool box = false;

  /// Normals k = 1..n of a row family.
  static SlabSystem from_rows(const RowFamily& rows, double rho, std::int64_t n, bool box = false);
  void validate() const;
};

struct VertexSet {
  std::vector<DenseVec> vertices;  // lexicographically sorted
  bool bounded = false;

  std::size_t size() const noexcept { return vertices.size(); }
};

/// True when both sets hold the same points up to Euclidean distance tol.
bool same_vertices(const VertexSet& a, const VertexSet& b, double tol = 1e-7);

struct EnumerationOptions {
  double zero_tol = 1e-9;   // incidence tolerance on normalized rows and rays
  double rank_tol = 1e-9;   // pivot tolerance in the adjacency rank test
  int max_dimension = 16;   // size guard on m for the double-description path
};

/// Incremental double-description enumeration of U~_n as slabs are added one
/// at a time. While the normals do not yet span R^m the region contains a
/// line, has no vertices and is reported unbounded.
class SlabVertexSweep {
public:
  SlabVertexSweep(int m, double rho, bool box, const EnumerationOptions& opts = {});
  ~SlabVertexSweep();
  SlabVertexSweep(SlabVertexSweep&&) noexcept;
  SlabVertexSweep& operator=(SlabVertexSweep&&) noexcept;

  void add_slab(std::span<const double> normal);
  std::size_t num_slabs() const noexcept;
  bool bounded() const noexcept;
  std::size_t vertex_count() const noexcept;
  VertexSet vertices() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// All vertices of U~_n (first n slabs, plus the box when flagged).
VertexSet vertex_enumerate(const SlabSystem& slabs, std::size_t n, const EnumerationOptions& opts = {});

/// Oracle: solves every m-subset of the bounding hyperplanes and keeps the
/// feasible points. Only for m <= 3 and small n.
VertexSet vertex_enumerate_brute_force(const SlabSystem& slabs, std::size_t n, double tol = 1e-9);

struct VertexCount {
  std::int64_t n = 0;
  bool bounded = false;
  std::size_t count = 0;
};

struct N0ByVertices {
  std::int64_t n0 = 0;
  std::size_t final_count = 0;
  std::vector<VertexCount> counts;  // every n visited, from 1
};

struct N0VertexOptions {
  bool box = false;
  std::int64_t n_cap = 60;
  EnumerationOptions enumeration;
};

/// Smallest n >= n_start whose vertex set equals that of U~_{n+1}. Throws
/// NumericalError when n_cap is reached first.
N0ByVertices find_n0_by_vertices(const RowFamily& rows, double rho, std::int64_t n_start,
                                 const N0VertexOptions& opts = {});

/// Vertex counts of U~_n for n = 1..n_max (unbounded rows have count 0).
std::vector<VertexCount> vertex_counts(const RowFamily& rows, double rho, std::int64_t n_max,
                                       const N0VertexOptions& opts = {});

struct ObjectivePoint {
  std::int64_t l = 0;
  double S = 0.0;
  double sup_norm = 0.0;  // certified ||A_* lambda(l)||_inf over all k
  bool certified = false; // lambda(l) feasible for every slab, not only k <= l
};

struct N0ByObjective {
  std::int64_t n0 = 0;
  std::vector<ObjectivePoint> sweep;
  bool nonincreasing = true;
};

struct N0ObjectiveOptions {
  double tol_S = 1e-9;
  /// Also require the optimiser at l to satisfy the whole semi-infinite
  /// system (certified sup norm at most rho * (1 + feasibility_slack)).
  bool require_certified = true;
  double feasibility_slack = 1e-8;
  std::int64_t l_cap = 5000;
  bool box = true;
  LpOptions lp;
};

/// max y0.lambda over the slabs k <= l, with the box |lambda_j| <= 1 when flagged.
LinearProgram dual_lp(const RowFamily& rows, const DenseVec& y0, double rho, std::int64_t l, bool box = true);

/// Smallest l >= l_start with S(l) = S(l+1) = S(l+2) to relative tol_S (and,
/// by default, a certified-feasible optimiser at l). Throws NumericalError at l_cap.
N0ByObjective find_n0_by_objective(const RowFamily& rows, const DenseVec& y0, double rho, std::int64_t l_start,
                                   const N0ObjectiveOptions& opts = {});

}  // namespace l1dual
