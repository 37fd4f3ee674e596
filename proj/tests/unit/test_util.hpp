#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "l1dual/core.hpp"
#include "l1dual/matrix.hpp"

namespace testutil {

inline std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline l1dual::DenseMatrix uniform_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  l1dual::DenseMatrix m(r, c);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double& x : m.data()) x = d(rng);
  return m;
}

inline double rel_diff(double a, double b, double floor = 1e-12) {
  const double s = std::max({std::fabs(a), std::fabs(b), floor});
  return std::fabs(a - b) / s;
}

}  // namespace testutil
