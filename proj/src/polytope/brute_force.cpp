#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l1dual/polytope.hpp"

namespace l1dual {

namespace {

// Solves the square system in place; false when singular.
bool solve_square(std::vector<double> a, std::vector<double> b, std::size_t m, std::vector<double>& x) {
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < m; ++i) {
      if (std::fabs(a[i * m + col]) > std::fabs(a[piv * m + col])) piv = i;
    }
    if (std::fabs(a[piv * m + col]) < 1e-12) return false;
    std::swap_ranges(a.begin() + piv * m, a.begin() + piv * m + m, a.begin() + col * m);
    std::swap(b[piv], b[col]);
    for (std::size_t i = col + 1; i < m; ++i) {
      const double f = a[i * m + col] / a[col * m + col];
      for (std::size_t c = col; c < m; ++c) a[i * m + c] -= f * a[col * m + c];
      b[i] -= f * b[col];
    }
  }
  x.assign(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < m; ++c) s -= a[i * m + c] * x[c];
    x[i] = s / a[i * m + i];
  }
  return true;
}

}  // namespace

VertexSet vertex_enumerate_brute_force(const SlabSystem& slabs, std::size_t n, double tol) {
  slabs.validate();
  const auto m = static_cast<std::size_t>(slabs.m);
  if (m > 3) throw std::invalid_argument("vertex_enumerate_brute_force: only for m <= 3");
  if (n > slabs.normals.size()) throw std::invalid_argument("vertex_enumerate_brute_force: n out of range");

  // Half-spaces a.x <= b.
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t k = 0; k < n; ++k) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> r(slabs.normals[k]);
      for (double& v : r) v *= s;
      A.push_back(std::move(r));
      b.push_back(slabs.half_width);
    }
  }
  if (slabs.box) {
    for (std::size_t j = 0; j < m; ++j) {
      for (double s : {1.0, -1.0}) {
        std::vector<double> r(m, 0.0);
        r[j] = s;
        A.push_back(std::move(r));
        b.push_back(1.0);
      }
    }
  }

  VertexSet out;
  std::vector<std::size_t> pick(m);
  std::vector<double> x;
  bool any_nonsingular = false;
  auto visit = [&]() {
    std::vector<double> sys(m * m), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::copy(A[pick[i]].begin(), A[pick[i]].end(), sys.begin() + i * m);
      rhs[i] = b[pick[i]];
    }
    if (!solve_square(sys, rhs, m, x)) return;
    any_nonsingular = true;
    for (std::size_t r = 0; r < A.size(); ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += A[r][c] * x[c];
      if (s > b[r] + tol) return;
    }
    DenseVec v(x);
    for (const auto& w : out.vertices) {
      double dist = 0.0;
      for (std::size_t c = 0; c < m; ++c) dist = std::max(dist, std::fabs(w[c] - v[c]));
      if (dist <= 1e-7) return;
    }
    out.vertices.push_back(std::move(v));
  };
  // Lexicographic m-subsets of the hyperplanes.
  const std::size_t H = A.size();
  if (H >= m) {
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    while (true) {
      visit();
      std::size_t i = m;
      while (i-- > 0 && pick[i] == H - m + i) {}
      if (i == static_cast<std::size_t>(-1)) break;
      ++pick[i];
      for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  // The region contains 0 and is symmetric, so it is bounded exactly when
  // some m bounding normals are independent.
  out.bounded = any_nonsingular;
  if (!out.bounded) out.vertices.clear();
  std::sort(out.vertices.begin(), out.vertices.end(), [](const DenseVec& a, const DenseVec& c) {
    return std::lexicographical_compare(a.begin(), a.end(), c.begin(), c.end());
  });
  return out;
}

}  // namespace l1dual
