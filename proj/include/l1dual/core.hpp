#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace l1dual {

/// Raised when an iterative or certified computation cannot produce a
/// trustworthy answer (stalled pivoting, non-finite iterates, envelope that
/// never certifies). Callers map it to exit code 1.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fixed-length real vector (data vectors, dual variables, finite iterates).
class DenseVec {
public:
  DenseVec() = default;
  explicit DenseVec(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  DenseVec(std::initializer_list<double> init) : values_(init) {}
  explicit DenseVec(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const DenseVec&, const DenseVec&) = default;

private:
  std::vector<double> values_;
};

/// One stored entry of a finitely supported sequence; indices start at 1.
struct SeqEntry {
  std::int64_t index = 1;
  double value = 0.0;
  friend bool operator==(const SeqEntry&, const SeqEntry&) = default;
};

/// Finitely supported element of l1(N). Indices are strictly increasing and
/// no stored value is exactly zero.
class SparseSeq {
public:
  SparseSeq() = default;
  /// Validates ordering and drops exact zeros.
  explicit SparseSeq(std::vector<SeqEntry> entries);

  /// Builds from a dense prefix x_1..x_n, dropping entries with |x_k| <= drop_below.
  static SparseSeq from_prefix(std::span<const double> prefix, double drop_below = 0.0);

  /// Places values[j] at indices[j]; indices must be ascending and positive.
  static SparseSeq scatter(std::span<const std::int64_t> indices, std::span<const double> values,
                           double drop_below = 0.0);

  const std::vector<SeqEntry>& entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  /// Value at index k (0 when not stored).
  double at(std::int64_t k) const;
  std::vector<std::int64_t> support() const;

  friend bool operator==(const SparseSeq&, const SparseSeq&) = default;

private:
  std::vector<SeqEntry> entries_;
};

double l1_norm(std::span<const double> v);
double l1_norm(const DenseVec& v);
double l1_norm(const SparseSeq& v);
double sup_norm(std::span<const double> v);
double sup_norm(const DenseVec& v);
double sup_norm(const SparseSeq& v);
double l2_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// Euclidean distance between two sparse sequences (union of supports).
double l2_distance(const SparseSeq& a, const SparseSeq& b);

/// Finite-dimensional norms available for direct-sum components.
enum class NormKind { L1, L2, LInf };

NormKind dual_kind(NormKind kind) noexcept;
double norm(std::span<const double> v, NormKind kind);

/// Unit-norm (in the dual norm) functional attaining <v, J(v)> = ||v||.
/// L1: sign vector. L2: v/||v||. LInf: signed unit vector at the first argmax.
/// Returns the zero vector for v = 0.
DenseVec norming_functional(std::span<const double> v, NormKind kind);

/// Parameters of the norm ||(a,b)|| = (||a||^p + ||b||^p)^(1/p), p = inf -> max.
struct DirectSumNorm {
  double p = 1.0;
  NormKind left = NormKind::L1;
  NormKind right = NormKind::L1;

  DirectSumNorm() = default;
  DirectSumNorm(double p_, NormKind l, NormKind r);

  /// Hoelder conjugate p' (inf for p = 1, 1 for p = inf).
  double conjugate() const noexcept;
  double evaluate(std::span<const double> a, std::span<const double> b) const;
  /// Norm of (lambda, mu) in the dual direct sum (conjugate exponent, dual kinds).
  double dual_evaluate(std::span<const double> lambda, std::span<const double> mu) const;
};

/// (a_val^p + b_val^p)^(1/p), or max for p = inf. Rejects p < 1 and negative inputs.
double directsum_norm(double a_val, double b_val, double p);

double holder_conjugate(double p);

struct NormingPair {
  DenseVec lambda;
  DenseVec mu;
};

/// Norming functional (lambda, mu) of the nonzero pair (a, b) in the direct sum:
/// unit norm in the dual direct sum and <a,lambda> + <b,mu> = ||(a,b)||.
/// For finite p the components are (||a||/N)^(p-1) J(a) and (||b||/N)^(p-1) J(b);
/// for p = inf the larger component gets all the weight (an exact tie splits it
/// evenly); for p = 1 both components are unit norming functionals.
NormingPair norming_functional_directsum(std::span<const double> a, std::span<const double> b,
                                         const DirectSumNorm& norm);

/// Scaling constant (1 + ||other||^p/||own||^p)^(1/p') that turns a component
/// of a finite-p norming pair into a unit norming functional of that component.
double component_rescale(double own_norm, double other_norm, double p);

/// Indices (1-based) where |c_k| >= (1 - rel_tol) * max|c| over the given prefix.
std::vector<std::int64_t> peak_indices(std::span<const double> c_prefix, double rel_tol);

/// Unit l1 vector norming the c0 prefix c: equal weights on its peak indices
/// with the signs of c. Empty when c = 0.
SparseSeq l1_norming_for_c0(std::span<const double> c_prefix, double rel_tol = 0.0);

/// ||x||_1 * ||c||_inf - <x, c> >= 0, zero exactly when x/||x||_1 norms c.
double norming_gap(const SparseSeq& x, std::span<const double> c_prefix);

}  // namespace l1dual
