#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "l1dual/polytope.hpp"
#include "l1dual/simd.hpp"

namespace l1dual {

SlabSystem SlabSystem::from_rows(const RowFamily& rows, double rho, std::int64_t n, bool box) {
  SlabSystem s;
  s.m = rows.m();
  s.half_width = rho;
  s.box = box;
  for (std::int64_t k = 1; k <= n; ++k) s.normals.push_back(rows.column(k));
  s.validate();
  return s;
}

void SlabSystem::validate() const {
  if (m <= 0) throw std::invalid_argument("SlabSystem: m must be positive");
  if (!(half_width > 0.0)) throw std::invalid_argument("SlabSystem: half width must be positive");
  for (const auto& g : normals) {
    if (g.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("SlabSystem: normal has wrong length");
  }
}

namespace {

bool lex_less(const DenseVec& a, const DenseVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

bool same_vertices(const VertexSet& a, const VertexSet& b, double tol) {
  if (a.bounded != b.bounded || a.size() != b.size()) return false;
  // Both are sorted; a greedy match in sorted order is exact for well
  // separated vertices, fall back to a quadratic search otherwise.
  std::vector<char> used(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto close = [&](std::size_t j) {
      double s = 0.0;
      for (std::size_t c = 0; c < a.vertices[i].size(); ++c) {
        const double d = a.vertices[i][c] - b.vertices[j][c];
        s += d * d;
      }
      return std::sqrt(s) <= tol;
    };
    if (!used[i] && close(i)) {
      used[i] = 1;
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && close(j)) {
        used[j] = 1;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Homogenised cone in R^{m+1} over (lambda, t): every bounding half-space
// a.lambda <= b becomes a.lambda - b t <= 0, and t >= 0 is row 0. Extreme
// rays with t > 0 are the vertices. Rows and rays are kept at unit length.
struct SlabVertexSweep::Impl {
  int m;
  std::size_t d;
  double rho;
  bool box;
  EnumerationOptions opts;

  std::vector<double> rows;  // num_rows x d
  std::size_t num_rows = 0;
  std::size_t slabs = 0;

  bool started = false;
  std::size_t processed = 0;  // rows [0, processed) are in the current cone
  std::size_t words = 1;
  std::vector<double> rx;         // ray coordinates, count x d
  std::vector<std::uint64_t> rz;  // zero sets, count x words
  std::size_t count = 0;

  Impl(int m_, double rho_, bool box_, const EnumerationOptions& o) : m(m_), d(m_ + 1), rho(rho_), box(box_), opts(o) {
    if (m <= 0) throw std::invalid_argument("SlabVertexSweep: m must be positive");
    if (m > opts.max_dimension) {
      throw std::invalid_argument("SlabVertexSweep: m = " + std::to_string(m) + " exceeds the enumeration limit " +
                                  std::to_string(opts.max_dimension));
    }
    if (!(rho > 0.0)) throw std::invalid_argument("SlabVertexSweep: rho must be positive");
    std::vector<double> r(d, 0.0);
    r[m] = -1.0;
    push_row(r);
    if (box) {
      for (int j = 0; j < m; ++j) {
        for (double sgn : {1.0, -1.0}) {
          std::fill(r.begin(), r.end(), 0.0);
          r[j] = sgn;
          r[m] = -1.0;
          push_row(r);
        }
      }
      try_start();
    }
  }

  std::span<const double> row(std::size_t i) const { return {rows.data() + i * d, d}; }
  std::span<double> ray(std::size_t r) { return {rx.data() + r * d, d}; }
  std::span<const double> ray(std::size_t r) const { return {rx.data() + r * d, d}; }
  std::uint64_t* zset(std::size_t r) { return rz.data() + r * words; }
  const std::uint64_t* zset(std::size_t r) const { return rz.data() + r * words; }

  void push_row(std::vector<double> r) {
    const double nr = l2_norm(r);
    for (double& v : r) v /= nr;
    rows.insert(rows.end(), r.begin(), r.end());
    ++num_rows;
  }

  void add_slab(std::span<const double> g) {
    if (g.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("SlabVertexSweep: normal has wrong length");
    std::vector<double> r(d);
    for (double sgn : {1.0, -1.0}) {
      for (int j = 0; j < m; ++j) r[j] = sgn * g[j];
      r[m] = -rho;
      push_row(r);
    }
    ++slabs;
    if (!started) try_start();
    if (started) {
      while (processed < num_rows) insert_row(processed++);
    }
  }

  // Rank of the listed rows (Gaussian elimination with partial pivoting).
  std::size_t rank_of(const std::vector<std::size_t>& idx, std::size_t stop_at) const {
    std::vector<double> a(idx.size() * d);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::copy_n(rows.data() + idx[i] * d, d, a.data() + i * d);
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < idx.size(); ++col) {
      std::size_t piv = rank;
      double best = std::fabs(a[rank * d + col]);
      for (std::size_t i = rank + 1; i < idx.size(); ++i) {
        const double v = std::fabs(a[i * d + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best <= opts.rank_tol) continue;
      if (piv != rank) std::swap_ranges(a.begin() + piv * d, a.begin() + piv * d + d, a.begin() + rank * d);
      const double p = a[rank * d + col];
      for (std::size_t i = rank + 1; i < idx.size(); ++i) {
        const double f = a[i * d + col] / p;
        if (f == 0.0) continue;
        for (std::size_t c = col; c < d; ++c) a[i * d + c] -= f * a[rank * d + c];
      }
      if (++rank >= stop_at) break;
    }
    return rank;
  }

  void set_words_for(std::size_t nrows) {
    const std::size_t need = (nrows + 63) / 64;
    if (need <= words) return;
    std::vector<std::uint64_t> grown(count * need, 0);
    for (std::size_t r = 0; r < count; ++r) std::copy_n(rz.data() + r * words, words, grown.data() + r * need);
    rz = std::move(grown);
    words = need;
  }

  // Greedy basis in row order; once d independent rows exist the cone is
  // pointed and the simplicial cone of the basis seeds the enumeration.
  void try_start() {
    std::vector<std::size_t> basis;
    for (std::size_t i = 0; i < num_rows && basis.size() < d; ++i) {
      basis.push_back(i);
      if (rank_of(basis, d) < basis.size()) basis.pop_back();
    }
    if (basis.size() < d) return;

    // Rays of {x : B x <= 0} are the columns of -B^{-1}.
    std::vector<double> B(d * d), inv(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      std::copy_n(rows.data() + basis[i] * d, d, B.data() + i * d);
      inv[i * d + i] = 1.0;
    }
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < d; ++i) {
        if (std::fabs(B[i * d + col]) > std::fabs(B[piv * d + col])) piv = i;
      }
      std::swap_ranges(B.begin() + piv * d, B.begin() + piv * d + d, B.begin() + col * d);
      std::swap_ranges(inv.begin() + piv * d, inv.begin() + piv * d + d, inv.begin() + col * d);
      const double p = B[col * d + col];
      for (std::size_t c = 0; c < d; ++c) {
        B[col * d + c] /= p;
        inv[col * d + c] /= p;
      }
      for (std::size_t i = 0; i < d; ++i) {
        if (i == col) continue;
        const double f = B[i * d + col];
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) {
          B[i * d + c] -= f * B[col * d + c];
          inv[i * d + c] -= f * inv[col * d + c];
        }
      }
    }

    started = true;
    applied = basis;
    count = 0;
    words = (num_rows + 63) / 64;
    rx.clear();
    rz.clear();
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) x[i] = -inv[i * d + k];
      append_ray(x, basis, k);
    }
    // Remaining rows of the prefix, in order, through the usual update.
    std::vector<char> in_basis(num_rows, 0);
    for (auto b : basis) in_basis[b] = 1;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < num_rows; ++i) {
      if (!in_basis[i]) rest.push_back(i);
    }
    // Rows are numbered by insertion order; basis rows count as processed.
    processed = num_rows;
    for (auto i : rest) insert_row_impl(i);
  }

  void append_ray(std::vector<double>& x, const std::vector<std::size_t>& basis, std::size_t skip) {
    const double nx = l2_norm(x);
    for (double& v : x) v /= nx;
    rx.insert(rx.end(), x.begin(), x.end());
    rz.resize(rz.size() + words, 0);
    std::uint64_t* z = rz.data() + count * words;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (i != skip) z[basis[i] / 64] |= std::uint64_t{1} << (basis[i] % 64);
    }
    ++count;
  }

  void insert_row(std::size_t h) {
    set_words_for(num_rows);
    insert_row_impl(h);
  }

  // One double-description step for row h (which may be any row not yet
  // applied). The zero set of a new ray is recomputed against every row
  // already in the cone, so degenerate incidences are not lost.
  void insert_row_impl(std::size_t h) {
    set_words_for(num_rows);
    const auto hr = row(h);
    std::vector<double> s(count);
    std::vector<std::size_t> plus, minus, zero;
    for (std::size_t r = 0; r < count; ++r) {
      s[r] = simd::dot(hr, ray(r));
      if (s[r] > opts.zero_tol) plus.push_back(r);
      else if (s[r] < -opts.zero_tol) minus.push_back(r);
      else zero.push_back(r);
    }
    applied.push_back(h);
    if (plus.empty()) {
      for (auto r : zero) zset(r)[h / 64] |= std::uint64_t{1} << (h % 64);
      return;
    }

    std::vector<double> nx;
    std::vector<std::uint64_t> nz;
    std::size_t ncount = 0;
    auto keep = [&](std::size_t r, bool tight) {
      nx.insert(nx.end(), rx.begin() + r * d, rx.begin() + r * d + d);
      nz.insert(nz.end(), rz.begin() + r * words, rz.begin() + r * words + words);
      if (tight) nz[ncount * words + h / 64] |= std::uint64_t{1} << (h % 64);
      ++ncount;
    };
    for (auto r : minus) keep(r, false);
    for (auto r : zero) keep(r, true);

    const std::size_t need = d - 2;
    std::vector<std::uint64_t> common(words);
    std::vector<std::size_t> idx;
    std::vector<double> x(d);
    for (auto p : plus) {
      const std::uint64_t* zp = zset(p);
      for (auto q : minus) {
        const std::uint64_t* zq = zset(q);
        std::size_t pc = 0;
        for (std::size_t w = 0; w < words; ++w) {
          common[w] = zp[w] & zq[w];
          pc += static_cast<std::size_t>(std::popcount(common[w]));
        }
        if (pc < need) continue;
        idx.clear();
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t bits = common[w];
          while (bits) {
            idx.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
          }
        }
        if (rank_of(idx, need + 1) != need) continue;

        const auto xp = ray(p);
        const auto xq = ray(q);
        for (std::size_t c = 0; c < d; ++c) x[c] = s[p] * xq[c] - s[q] * xp[c];
        const double nrm = l2_norm(x);
        for (double& v : x) v /= nrm;
        nx.insert(nx.end(), x.begin(), x.end());
        nz.resize(nz.size() + words, 0);
        std::uint64_t* z = nz.data() + ncount * words;
        for (auto g : applied) {
          if (g == h || std::fabs(simd::dot(row(g), x)) <= opts.zero_tol) z[g / 64] |= std::uint64_t{1} << (g % 64);
        }
        ++ncount;
      }
    }
    rx = std::move(nx);
    rz = std::move(nz);
    count = ncount;
  }

  std::vector<std::size_t> applied;

  bool is_bounded() const {
    if (!started) return false;
    for (std::size_t r = 0; r < count; ++r) {
      if (ray(r)[m] <= opts.zero_tol) return false;
    }
    return true;
  }

  VertexSet vertices() const {
    VertexSet vs;
    vs.bounded = is_bounded();
    if (!vs.bounded) return vs;
    vs.vertices.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
      const auto x = ray(r);
      DenseVec v(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) v[j] = x[j] / x[m];
      vs.vertices.push_back(std::move(v));
    }
    std::sort(vs.vertices.begin(), vs.vertices.end(), lex_less);
    return vs;
  }
};

SlabVertexSweep::SlabVertexSweep(int m, double rho, bool box, const EnumerationOptions& opts)
    : impl_(std::make_unique<Impl>(m, rho, box, opts)) {}
SlabVertexSweep::~SlabVertexSweep() = default;
SlabVertexSweep::SlabVertexSweep(SlabVertexSweep&&) noexcept = default;
SlabVertexSweep& SlabVertexSweep::operator=(SlabVertexSweep&&) noexcept = default;

void SlabVertexSweep::add_slab(std::span<const double> normal) { impl_->add_slab(normal); }
std::size_t SlabVertexSweep::num_slabs() const noexcept { return impl_->slabs; }
bool SlabVertexSweep::bounded() const noexcept { return impl_->is_bounded(); }
std::size_t SlabVertexSweep::vertex_count() const noexcept { return impl_->is_bounded() ? impl_->count : 0; }
VertexSet SlabVertexSweep::vertices() const { return impl_->vertices(); }

VertexSet vertex_enumerate(const SlabSystem& slabs, std::size_t n, const EnumerationOptions& opts) {
  slabs.validate();
  if (n < 1 || n > slabs.normals.size()) throw std::invalid_argument("vertex_enumerate: n out of range");
  SlabVertexSweep sweep(slabs.m, slabs.half_width, slabs.box, opts);
  for (std::size_t k = 0; k < n; ++k) sweep.add_slab(slabs.normals[k]);
  return sweep.vertices();
}

}  // namespace l1dual
