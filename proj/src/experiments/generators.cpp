#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "l1dual/experiments.hpp"

namespace l1dual {

RowFamily gen_rows_trig(int m) {
  if (m <= 0 || m % 2 != 0) throw std::invalid_argument("gen_rows_trig: m must be a positive even integer");
  const int half = m / 2;
  auto eval = [half](int j, std::int64_t k) {
    const double kk = static_cast<double>(k);
    if (j <= half) return std::cos(static_cast<double>(j) * kk) / kk;
    return std::sin(static_cast<double>(j - half) * kk) / kk;
  };
  auto env = [](std::int64_t k) { return 1.0 / static_cast<double>(k); };
  return RowFamily(m, eval, env, "trig", {{"m", static_cast<double>(m)}});
}

RowFamily gen_rows_identity(int m) {
  if (m <= 0) throw std::invalid_argument("gen_rows_identity: m must be positive");
  auto eval = [](int j, std::int64_t k) { return static_cast<std::int64_t>(j) == k ? 1.0 : 0.0; };
  auto env = [m](std::int64_t k) { return k <= m ? 1.0 : 0.0; };
  return RowFamily(m, eval, env, "identity", {{"m", static_cast<double>(m)}});
}

RowFamily make_rows(const std::string& generator, int m) {
  if (generator == "trig") return gen_rows_trig(m);
  if (generator == "identity") return gen_rows_identity(m);
  throw std::invalid_argument("unknown generator '" + generator + "' (expected trig or identity)");
}

double truth_tail_bound(const RowFamily& rows, std::int64_t K) {
  // sum_{k>K} env(k)/(10k^2) <= env(K+1) * sum_{k>K} 1/(10k^2) <= env(K+1)/(10K);
  // with env(k) <= 1/k the sharper integral bound 1/(20K^2) applies.
  const double Kd = static_cast<double>(K);
  const double generic = rows.envelope(K + 1) / (10.0 * Kd);
  if (rows.id() == "trig") return std::min(generic, 1.0 / (20.0 * Kd * Kd));
  return generic;
}

TruthAndData gen_truth_and_data(const RowFamily& rows, double tail_tol) {
  if (!(tail_tol > 0.0)) throw std::invalid_argument("gen_truth_and_data: tail_tol must be positive");
  TruthAndData out;
  out.x0 = [](std::int64_t k) { return 1.0 / (10.0 * static_cast<double>(k) * static_cast<double>(k)); };
  std::int64_t K = 1;
  while (truth_tail_bound(rows, K) >= tail_tol) K *= 2;
  // Shrink back to the smallest K in (K/2, K] that certifies.
  std::int64_t lo = K / 2, hi = K;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (truth_tail_bound(rows, mid) < tail_tol ? hi : lo) = mid;
  }
  K = hi;
  const auto m = static_cast<std::size_t>(rows.m());
  // Neumaier summation, smallest terms first.
  std::vector<double> sum(m, 0.0), comp(m, 0.0);
  std::vector<double> col(m);
  for (std::int64_t k = K; k >= 1; --k) {
    rows.column(k, col);
    const double xk = out.x0(k);
    for (std::size_t j = 0; j < m; ++j) {
      const double term = col[j] * xk;
      const double t = sum[j] + term;
      if (std::fabs(sum[j]) >= std::fabs(term)) comp[j] += (sum[j] - t) + term;
      else comp[j] += (term - t) + sum[j];
      sum[j] = t;
    }
  }
  out.y = DenseVec(m);
  for (std::size_t j = 0; j < m; ++j) out.y[j] = sum[j] + comp[j];
  out.terms = K;
  out.tail_bound = truth_tail_bound(rows, K);
  return out;
}

DenseVec add_noise(const DenseVec& y, double noise_factor, std::uint64_t seed) {
  if (y.empty()) throw std::invalid_argument("add_noise: empty data");
  if (!(noise_factor >= 0.0)) throw std::invalid_argument("add_noise: noise_factor must be >= 0");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (!(*hi > *lo)) throw std::invalid_argument("add_noise: data is constant (max y = min y)");
  DenseVec out = y;
  if (noise_factor == 0.0) return out;
  const double sigma = noise_factor * (*hi - *lo);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& v : out) v += normal(gen);
  return out;
}

}  // namespace l1dual
