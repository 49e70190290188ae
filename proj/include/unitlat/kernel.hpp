#pragma once

// Exact low-rank integer lattices in Z^n (n <= 4) and a randomized
// property suite for the basic facts about orthogonal lattices and
// successive minima, each checked by brute-force enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unitlat/errors.hpp"

namespace unitlat::kernel {

using Vec = std::vector<std::int64_t>;

inline std::int64_t dot(const Vec& a, const Vec& b) {
  std::int64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

/// Exact determinant by fraction-free elimination (Bareiss).
inline std::int64_t determinant(std::vector<std::vector<std::int64_t>> m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline std::vector<std::vector<std::int64_t>> gram_matrix(const std::vector<Vec>& vs) {
  std::vector<std::vector<std::int64_t>> g(vs.size(), std::vector<std::int64_t>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i) {
    for (size_t j = 0; j < vs.size(); ++j) g[i][j] = dot(vs[i], vs[j]);
  }
  return g;
}

/// A lattice generated by linearly independent integer rows.
class IntLattice {
 public:
  explicit IntLattice(std::vector<Vec> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw PreconditionError("empty basis");
    for (const auto& b : basis_) {
      if (b.size() != basis_[0].size()) throw PreconditionError("ragged basis");
    }
    gram_det_ = determinant(gram_matrix(basis_));
    if (gram_det_ == 0) throw PreconditionError("basis vectors are linearly dependent");
  }

  size_t rank() const { return basis_.size(); }
  size_t dim() const { return basis_[0].size(); }
  const std::vector<Vec>& basis() const { return basis_; }
  /// det of the Gram matrix (the squared covolume).
  std::int64_t gram_det() const { return gram_det_; }

  /// All nonzero lattice vectors with squared norm <= bound, by
  /// Fincke-Pohst recursion over Gram-Schmidt coordinates. Floating point
  /// only prunes (with slack); norms are checked exactly.
  std::vector<Vec> enumerate(std::int64_t bound) const;

 private:
  std::vector<Vec> basis_;
  std::int64_t gram_det_;
};

inline std::vector<Vec> IntLattice::enumerate(std::int64_t bound) const {
  const size_t m = rank(), n = dim();
  // Gram-Schmidt: b_i = b*_i + sum_{j<i} mu_ij b*_j
  std::vector<std::vector<double>> mu(m, std::vector<double>(m, 0.0));
  std::vector<double> bstar2(m);
  std::vector<std::vector<double>> bstar(m, std::vector<double>(n));
  for (size_t i = 0; i < m; ++i) {
    for (size_t k = 0; k < n; ++k) bstar[i][k] = static_cast<double>(basis_[i][k]);
    for (size_t j = 0; j < i; ++j) {
      double d = 0;
      for (size_t k = 0; k < n; ++k) d += static_cast<double>(basis_[i][k]) * bstar[j][k];
      mu[i][j] = d / bstar2[j];
      for (size_t k = 0; k < n; ++k) bstar[i][k] -= mu[i][j] * bstar[j][k];
    }
    bstar2[i] = 0;
    for (size_t k = 0; k < n; ++k) bstar2[i] += bstar[i][k] * bstar[i][k];
  }
  const double slack = 1e-7 * (1.0 + static_cast<double>(bound));
  std::vector<Vec> out;
  std::vector<std::int64_t> x(m, 0);
  // Recurse from the last coordinate down.
  auto rec = [&](auto&& self, long level, double partial) -> void {
    if (level < 0) {
      Vec v(n, 0);
      bool nonzero = false;
      for (size_t i = 0; i < m; ++i) {
        if (x[i] != 0) nonzero = true;
        for (size_t k = 0; k < n; ++k) v[k] += x[i] * basis_[i][k];
      }
      if (nonzero && dot(v, v) <= bound) out.push_back(std::move(v));
      return;
    }
    const size_t l = static_cast<size_t>(level);
    double c = 0;
    for (size_t i = l + 1; i < m; ++i) c -= mu[i][l] * static_cast<double>(x[i]);
    double room = (static_cast<double>(bound) - partial + slack) / bstar2[l];
    if (room < 0) return;
    double r = std::sqrt(room);
    auto lo = static_cast<std::int64_t>(std::ceil(c - r - 1e-9));
    auto hi = static_cast<std::int64_t>(std::floor(c + r + 1e-9));
    for (std::int64_t t = lo; t <= hi; ++t) {
      x[l] = t;
      double diff = static_cast<double>(t) - c;
      self(self, level - 1, partial + diff * diff * bstar2[l]);
    }
    x[l] = 0;
  };
  rec(rec, static_cast<long>(m) - 1, 0.0);
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    auto na = dot(a, a), nb = dot(b, b);
    return na != nb ? na < nb : a > b;
  });
  return out;
}

inline size_t rank_of(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  return determinant(gram_matrix(vs)) != 0 ? vs.size() : 0;
}

struct Minima {
  /// Squared successive minima.
  std::vector<std::int64_t> lambda2;
  std::vector<Vec> achieving;
  /// All vectors with norm <= lambda_m.
  std::vector<Vec> short_vectors;
};

/// LLL-reduced copy of a basis (delta = 3/4), exact integer updates.
inline std::vector<Vec> lll_reduce(std::vector<Vec> b) {
  const size_t m = b.size();
  auto gso = [&](std::vector<std::vector<double>>& mu, std::vector<double>& B) {
    std::vector<std::vector<double>> bs(m);
    for (size_t i = 0; i < m; ++i) {
      bs[i].assign(b[i].begin(), b[i].end());
      for (size_t j = 0; j < i; ++j) {
        double d = 0;
        for (size_t k = 0; k < b[i].size(); ++k) d += static_cast<double>(b[i][k]) * bs[j][k];
        mu[i][j] = d / B[j];
        for (size_t k = 0; k < b[i].size(); ++k) bs[i][k] -= mu[i][j] * bs[j][k];
      }
      B[i] = 0;
      for (double x : bs[i]) B[i] += x * x;
    }
  };
  std::vector<std::vector<double>> mu(m, std::vector<double>(m));
  std::vector<double> B(m);
  size_t k = 1;
  while (k < m) {
    gso(mu, B);
    for (size_t j = k; j-- > 0;) {
      auto r = static_cast<std::int64_t>(std::llround(mu[k][j]));
      if (r != 0) {
        for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= r * b[j][c];
        gso(mu, B);
      }
    }
    if (B[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      k = std::max<size_t>(k - 1, 1);
    }
  }
  return b;
}

inline Minima successive_minima(const IntLattice& L) {
  std::int64_t bound = 0;
  for (const auto& b : lll_reduce(L.basis())) bound = std::max(bound, dot(b, b));
  Minima mn;
  auto vs = L.enumerate(bound);
  std::vector<Vec> chosen;
  for (const auto& v : vs) {
    auto trial = chosen;
    trial.push_back(v);
    if (rank_of(trial) == trial.size()) {
      chosen.push_back(v);
      mn.lambda2.push_back(dot(v, v));
      if (chosen.size() == L.rank()) break;
    }
  }
  mn.achieving = chosen;
  for (auto& v : vs) {
    if (dot(v, v) <= mn.lambda2.back()) mn.short_vectors.push_back(std::move(v));
  }
  return mn;
}

/// True if v is an integer combination of the basis rows.
inline bool contains(const IntLattice& L, const Vec& v) {
  // v in L iff v in the real span and Gram(basis + v) is singular with
  // integral coefficients; solve via Cramer on the Gram system.
  const auto& B = L.basis();
  const size_t m = B.size();
  auto G = gram_matrix(B);
  Vec rhs(m);
  for (size_t i = 0; i < m; ++i) rhs[i] = dot(B[i], v);
  const std::int64_t D = L.gram_det();
  Vec combo(L.dim(), 0);
  for (size_t k = 0; k < m; ++k) {
    auto Gk = G;
    for (size_t i = 0; i < m; ++i) Gk[i][k] = rhs[i];
    std::int64_t num = determinant(Gk);
    if (num % D != 0) return false;
    for (size_t c = 0; c < L.dim(); ++c) combo[c] += (num / D) * B[k][c];
  }
  return combo == v;
}

/// Every orthogonal basis of L, each up to sign and order (vectors are
/// normalized to a positive leading entry and listed by enumeration order).
inline std::vector<std::vector<Vec>> orthogonal_bases(const IntLattice& L, const Minima& mn) {
  std::vector<Vec> cands;
  for (const auto& v : mn.short_vectors) {
    auto lead = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
    if (lead != v.end() && *lead > 0) cands.push_back(v);
  }
  std::vector<std::vector<Vec>> out;
  std::vector<Vec> cur;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (cur.size() == L.rank()) {
      if (determinant(gram_matrix(cur)) == L.gram_det()) out.push_back(cur);
      return;
    }
    for (size_t i = start; i < cands.size(); ++i) {
      bool ok = true;
      for (const auto& c : cur) {
        if (dot(c, cands[i]) != 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cur.push_back(cands[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline Vec normalized_sign(Vec v) {
  auto lead = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
  if (lead != v.end() && *lead < 0) {
    for (auto& x : v) x = -x;
  }
  return v;
}

inline bool same_up_to_sign_and_order(std::vector<Vec> a, std::vector<Vec> b) {
  if (a.size() != b.size()) return false;
  for (auto& v : a) v = normalized_sign(std::move(v));
  for (auto& v : b) v = normalized_sign(std::move(v));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// ---------------------------------------------------------------------------
// Random instances

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  /// A random orthogonal integer basis of rank m in Z^n, m <= n <= 4.
  std::vector<Vec> orthogonal_basis(size_t m, size_t n) {
    for (;;) {
      std::vector<Vec> rows = orthogonal_frame(n);
      std::shuffle(rows.begin(), rows.end(), rng_);
      rows.resize(m);
      bool ok = true;
      for (auto& r : rows) {
        auto g = std::accumulate(r.begin(), r.end(), std::int64_t{0},
                                 [](std::int64_t a, std::int64_t b) { return std::gcd(a, b); });
        if (g == 0) {
          ok = false;
          break;
        }
        std::int64_t k = uniform(1, 3);
        for (auto& x : r) x = x / g * k;
      }
      if (ok) return rows;
    }
  }

  /// A random integer basis of rank m in Z^n with nonzero Gram determinant.
  std::vector<Vec> random_basis(size_t m, size_t n, std::int64_t range) {
    for (;;) {
      std::vector<Vec> rows(m, Vec(n));
      for (auto& r : rows) {
        for (auto& x : r) x = uniform(-range, range);
      }
      if (determinant(gram_matrix(rows)) != 0) return rows;
    }
  }

  /// Replaces the basis by B' = U B for a random unimodular U with small entries.
  std::vector<Vec> scramble(std::vector<Vec> rows) {
    const size_t m = rows.size();
    for (int step = 0; step < 3; ++step) {
      if (m < 2) break;
      size_t i = static_cast<size_t>(uniform(0, static_cast<std::int64_t>(m) - 1));
      size_t j = static_cast<size_t>(uniform(0, static_cast<std::int64_t>(m) - 2));
      if (j >= i) ++j;
      std::int64_t c = uniform(-1, 1);
      for (size_t k = 0; k < rows[i].size(); ++k) rows[i][k] += c * rows[j][k];
    }
    return rows;
  }

 private:
  std::vector<Vec> orthogonal_frame(size_t n) {
    for (;;) {
      if (n == 1) return {Vec{1}};
      if (n == 2) {
        std::int64_t a = uniform(-3, 3), b = uniform(-3, 3);
        if (a == 0 && b == 0) continue;
        return {Vec{a, b}, Vec{-b, a}};
      }
      if (n == 3) {
        Vec v{uniform(-2, 2), uniform(-2, 2), uniform(-2, 2)};
        Vec r{uniform(-2, 2), uniform(-2, 2), uniform(-2, 2)};
        Vec w = cross(v, r);
        Vec z = cross(v, w);
        if (dot(v, v) == 0 || dot(w, w) == 0 || dot(z, z) == 0) continue;
        return {v, w, z};
      }
      // Rows of the left-multiplication matrix of a quaternion are orthogonal.
      std::int64_t a = uniform(-2, 2), b = uniform(-2, 2), c = uniform(-2, 2), d = uniform(-2, 2);
      if (a == 0 && b == 0 && c == 0 && d == 0) continue;
      return {Vec{a, b, c, d}, Vec{-b, a, -d, c}, Vec{-c, d, a, -b}, Vec{-d, -c, b, a}};
    }
  }

  static Vec cross(const Vec& a, const Vec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  }

  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Property suite

struct PropositionResult {
  std::string name;
  long checked = 0;
  long failures = 0;
  std::string counterexample;

  bool passed() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) counterexample = what;
  }
};

struct KernelReport {
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<PropositionResult> results;

  bool passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
  }
};

inline std::string describe(const std::vector<Vec>& basis) {
  std::string s = "{";
  for (size_t i = 0; i < basis.size(); ++i) s += (i ? " " : "") + to_string(basis[i]);
  return s + "}";
}

/// Runs `trials` random instances. Each trial builds an orthogonal lattice
/// presented by a scrambled basis, a lattice L_W + Z v0 with v0 orthogonal to
/// L_W, and a random (usually non-orthogonal) lattice, then checks:
///   lambda1     shortest orthogonal basis vector has length lambda_1
///   lambda_i    sorted orthogonal basis lengths are the successive minima
///   unique      every orthogonal basis agrees up to sign and order
///   one-vector  every orthogonal basis of L_W + Z v0 contains +-v0
///   rank2       a non-orthogonal pair achieving (lambda_1, lambda_2) in
///               rank two rules out any orthogonal basis
inline KernelReport check_kernel_propositions(long trials, std::uint64_t seed) {
  KernelReport rep;
  rep.trials = trials;
  rep.seed = seed;
  PropositionResult p_l1;
  p_l1.name = "lambda1-equals-shortest-orthogonal-vector";
  PropositionResult p_li;
  p_li.name = "orthogonal-basis-lengths-are-successive-minima";
  PropositionResult p_unique;
  p_unique.name = "orthogonal-basis-unique-up-to-sign-and-order";
  PropositionResult p_one;
  p_one.name = "orthogonal-complement-vector-in-every-orthogonal-basis";
  PropositionResult p_rank2;
  p_rank2.name = "rank2-nonorthogonal-minimal-pair-excludes-orthogonality";
  Generator gen(seed);

  auto sorted_norms = [](const std::vector<Vec>& b) {
    std::vector<std::int64_t> n;
    for (const auto& v : b) n.push_back(dot(v, v));
    std::sort(n.begin(), n.end());
    return n;
  };

  auto check_rank2 = [&](const IntLattice& L, const Minima& mn, bool has_orthogonal) {
    if (L.rank() != 2) return;
    for (const auto& w1 : mn.short_vectors) {
      if (dot(w1, w1) != mn.lambda2[0]) continue;
      for (const auto& w2 : mn.short_vectors) {
        if (dot(w2, w2) != mn.lambda2[1] || rank_of({w1, w2}) != 2) continue;
        if (dot(w1, w2) == 0) continue;
        ++p_rank2.checked;
        if (has_orthogonal) {
          p_rank2.fail("lattice " + describe(L.basis()) + " has orthogonal basis despite pair " +
                       to_string(w1) + ", " + to_string(w2));
        }
        return;
      }
    }
  };

  for (long t = 0; t < trials; ++t) {
    const size_t n = static_cast<size_t>(gen.uniform(2, 4));
    const size_t m = static_cast<size_t>(gen.uniform(2, static_cast<std::int64_t>(n)));

    // Orthogonal lattice behind a scrambled basis.
    {
      auto ortho = gen.orthogonal_basis(m, n);
      IntLattice L(gen.scramble(ortho));
      auto mn = successive_minima(L);
      auto norms = sorted_norms(ortho);
      ++p_l1.checked;
      if (mn.lambda2[0] != norms[0]) p_l1.fail("lattice " + describe(ortho));
      ++p_li.checked;
      if (mn.lambda2 != norms) p_li.fail("lattice " + describe(ortho));
      auto bases = orthogonal_bases(L, mn);
      ++p_unique.checked;
      if (bases.empty()) {
        p_unique.fail("no orthogonal basis found for " + describe(ortho));
      }
      for (const auto& b : bases) {
        if (!same_up_to_sign_and_order(b, ortho)) {
          p_unique.fail(describe(b) + " differs from " + describe(ortho));
          break;
        }
      }
      check_rank2(L, mn, !bases.empty());
    }

    // L = L_W + Z v0 with L_W in the orthogonal complement of v0.
    {
      auto ortho = gen.orthogonal_basis(m, n);
      const size_t k = static_cast<size_t>(gen.uniform(0, static_cast<std::int64_t>(m) - 1));
      Vec v0 = ortho[k];
      std::vector<Vec> w;
      for (size_t i = 0; i < m; ++i) {
        if (i != k) w.push_back(ortho[i]);
      }
      // Sometimes replace L_W by a sublattice that need not be orthogonal.
      if (w.size() >= 2 && gen.uniform(0, 1) == 1) {
        for (size_t i = 1; i < w.size(); ++i) {
          std::int64_t c = gen.uniform(1, 2);
          for (size_t q = 0; q < w[i].size(); ++q) w[i][q] += c * w[0][q];
        }
        std::int64_t s = gen.uniform(1, 2);
        for (auto& x : w[0]) x *= s;
      }
      w = gen.scramble(std::move(w));
      std::vector<Vec> rows = w;
      rows.push_back(v0);
      IntLattice L(gen.scramble(rows));
      auto mn = successive_minima(L);
      auto bases = orthogonal_bases(L, mn);
      for (const auto& b : bases) {
        ++p_one.checked;
        bool found = std::any_of(b.begin(), b.end(), [&](const Vec& x) {
          return normalized_sign(x) == normalized_sign(v0);
        });
        if (!found) p_one.fail("basis " + describe(b) + " lacks v0 = " + to_string(v0));
        ++p_li.checked;
        if (mn.lambda2 != sorted_norms(b)) p_li.fail("lattice " + describe(b));
      }
      check_rank2(L, mn, !bases.empty());
    }

    // Random lattice: whenever an orthogonal basis exists the minima match
    // it; in rank two the minimal-pair criterion must agree.
    {
      IntLattice L(gen.random_basis(m, n, 3));
      auto mn = successive_minima(L);
      auto bases = orthogonal_bases(L, mn);
      for (const auto& b : bases) {
        ++p_li.checked;
        if (mn.lambda2 != sorted_norms(b)) p_li.fail("lattice " + describe(L.basis()));
        ++p_l1.checked;
        if (mn.lambda2[0] != sorted_norms(b)[0]) p_l1.fail("lattice " + describe(L.basis()));
      }
      if (bases.size() > 1) {
        ++p_unique.checked;
        for (const auto& b : bases) {
          if (!same_up_to_sign_and_order(b, bases[0])) {
            p_unique.fail(describe(b) + " differs from " + describe(bases[0]));
            break;
          }
        }
      }
      check_rank2(L, mn, !bases.empty());
    }
  }
  rep.results = {p_l1, p_li, p_unique, p_one, p_rank2};
  return rep;
}

}  // namespace unitlat::kernel
