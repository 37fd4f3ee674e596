#include "l1dual/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l1dual/simd.hpp"

namespace l1dual {

SparseSeq::SparseSeq(std::vector<SeqEntry> entries) {
  entries_.reserve(entries.size());
  std::int64_t last = 0;
  for (const SeqEntry& e : entries) {
    if (e.index < 1) throw std::invalid_argument("SparseSeq: indices start at 1");
    if (e.index <= last) throw std::invalid_argument("SparseSeq: indices must be strictly increasing");
    if (!std::isfinite(e.value)) throw std::invalid_argument("SparseSeq: non-finite value");
    last = e.index;
    if (e.value != 0.0) entries_.push_back(e);
  }
}

SparseSeq SparseSeq::from_prefix(std::span<const double> prefix, double drop_below) {
  std::vector<SeqEntry> out;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (std::fabs(prefix[k]) > drop_below) out.push_back({static_cast<std::int64_t>(k + 1), prefix[k]});
  }
  return SparseSeq(std::move(out));
}

SparseSeq SparseSeq::scatter(std::span<const std::int64_t> indices, std::span<const double> values,
                             double drop_below) {
  if (indices.size() != values.size()) throw std::invalid_argument("SparseSeq::scatter: length mismatch");
  std::vector<SeqEntry> out;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (std::fabs(values[j]) > drop_below) out.push_back({indices[j], values[j]});
  }
  return SparseSeq(std::move(out));
}

double SparseSeq::at(std::int64_t k) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const SeqEntry& e, std::int64_t key) { return e.index < key; });
  return (it != entries_.end() && it->index == k) ? it->value : 0.0;
}

std::vector<std::int64_t> SparseSeq::support() const {
  std::vector<std::int64_t> s;
  s.reserve(entries_.size());
  for (const auto& e : entries_) s.push_back(e.index);
  return s;
}

double l1_norm(std::span<const double> v) { return simd::sum_abs(v); }
double l1_norm(const DenseVec& v) { return l1_norm(v.span()); }
double l1_norm(const SparseSeq& v) {
  double s = 0.0;
  for (const auto& e : v.entries()) s += std::fabs(e.value);
  return s;
}

double sup_norm(std::span<const double> v) { return simd::max_abs(v); }
double sup_norm(const DenseVec& v) { return sup_norm(v.span()); }
double sup_norm(const SparseSeq& v) {
  double m = 0.0;
  for (const auto& e : v.entries()) m = std::max(m, std::fabs(e.value));
  return m;
}

double l2_norm(std::span<const double> v) {
  // Scaled to avoid overflow on large entries.
  const double scale = sup_norm(v);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return simd::dot(a, b);
}

double l2_distance(const SparseSeq& a, const SparseSeq& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    double d;
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      d = ea[i++].value;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      d = eb[j++].value;
    } else {
      d = ea[i++].value - eb[j++].value;
    }
    s += d * d;
  }
  return std::sqrt(s);
}

NormKind dual_kind(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L1: return NormKind::LInf;
    case NormKind::LInf: return NormKind::L1;
    case NormKind::L2: return NormKind::L2;
  }
  return NormKind::L2;
}

double norm(std::span<const double> v, NormKind kind) {
  switch (kind) {
    case NormKind::L1: return l1_norm(v);
    case NormKind::L2: return l2_norm(v);
    case NormKind::LInf: return sup_norm(v);
  }
  return 0.0;
}

DenseVec norming_functional(std::span<const double> v, NormKind kind) {
  DenseVec out(v.size(), 0.0);
  switch (kind) {
    case NormKind::L1:
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
      break;
    case NormKind::L2: {
      const double n = l2_norm(v);
      if (n > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
      }
      break;
    }
    case NormKind::LInf: {
      double best = 0.0;
      std::size_t arg = v.size();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) > best) {
          best = std::fabs(v[i]);
          arg = i;
        }
      }
      if (arg < v.size()) out[arg] = v[arg] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return out;
}

double holder_conjugate(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("holder_conjugate: p must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double directsum_norm(double a_val, double b_val, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("directsum_norm: p must be >= 1, got " + std::to_string(p));
  if (a_val < 0.0 || b_val < 0.0) throw std::invalid_argument("directsum_norm: component norms must be >= 0");
  if (std::isinf(p)) return std::max(a_val, b_val);
  if (p == 1.0) return a_val + b_val;
  const double big = std::max(a_val, b_val);
  if (big == 0.0) return 0.0;
  const double ra = a_val / big;
  const double rb = b_val / big;
  return big * std::pow(std::pow(ra, p) + std::pow(rb, p), 1.0 / p);
}

DirectSumNorm::DirectSumNorm(double p_, NormKind l, NormKind r) : p(p_), left(l), right(r) {
  if (!(p >= 1.0)) throw std::invalid_argument("DirectSumNorm: p must be >= 1");
}

double DirectSumNorm::conjugate() const noexcept {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double DirectSumNorm::evaluate(std::span<const double> a, std::span<const double> b) const {
  return directsum_norm(norm(a, left), norm(b, right), p);
}

double DirectSumNorm::dual_evaluate(std::span<const double> lambda, std::span<const double> mu) const {
  return directsum_norm(norm(lambda, dual_kind(left)), norm(mu, dual_kind(right)), conjugate());
}

double component_rescale(double own_norm, double other_norm, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("component_rescale: p must be in (1, inf)");
  if (own_norm <= 0.0) throw std::invalid_argument("component_rescale: own norm must be positive");
  const double pc = p / (p - 1.0);
  return std::pow(1.0 + std::pow(other_norm / own_norm, p), 1.0 / pc);
}

NormingPair norming_functional_directsum(std::span<const double> a, std::span<const double> b,
                                         const DirectSumNorm& ds) {
  const double na = norm(a, ds.left);
  const double nb = norm(b, ds.right);
  if (na == 0.0 && nb == 0.0) throw std::invalid_argument("norming_functional_directsum: (a, b) = (0, 0)");

  NormingPair out{norming_functional(a, ds.left), norming_functional(b, ds.right)};
  auto scale = [](DenseVec& v, double s) {
    for (double& x : v) x *= s;
  };

  if (std::isinf(ds.p)) {
    if (na > nb) {
      scale(out.mu, 0.0);
    } else if (nb > na) {
      scale(out.lambda, 0.0);
    } else {
      scale(out.lambda, 0.5);
      scale(out.mu, 0.5);
    }
    return out;
  }
  if (ds.p == 1.0) {
    if (nb == 0.0) scale(out.mu, 0.0);
    if (na == 0.0) scale(out.lambda, 0.0);
    return out;
  }
  const double total = directsum_norm(na, nb, ds.p);
  scale(out.lambda, std::pow(na / total, ds.p - 1.0));
  scale(out.mu, std::pow(nb / total, ds.p - 1.0));
  return out;
}

std::vector<std::int64_t> peak_indices(std::span<const double> c_prefix, double rel_tol) {
  const double top = sup_norm(c_prefix);
  std::vector<std::int64_t> out;
  if (top == 0.0) return out;
  const double cut = top * (1.0 - rel_tol);
  for (std::size_t k = 0; k < c_prefix.size(); ++k) {
    if (std::fabs(c_prefix[k]) >= cut) out.push_back(static_cast<std::int64_t>(k + 1));
  }
  return out;
}

SparseSeq l1_norming_for_c0(std::span<const double> c_prefix, double rel_tol) {
  const auto peaks = peak_indices(c_prefix, rel_tol);
  std::vector<SeqEntry> e;
  const double w = peaks.empty() ? 0.0 : 1.0 / static_cast<double>(peaks.size());
  for (auto k : peaks) e.push_back({k, c_prefix[k - 1] > 0.0 ? w : -w});
  return SparseSeq(std::move(e));
}

double norming_gap(const SparseSeq& x, std::span<const double> c_prefix) {
  double pairing = 0.0;
  for (const auto& e : x.entries()) {
    if (static_cast<std::size_t>(e.index) <= c_prefix.size()) pairing += e.value * c_prefix[e.index - 1];
  }
  return l1_norm(x) * sup_norm(c_prefix) - pairing;
}

}  // namespace l1dual
