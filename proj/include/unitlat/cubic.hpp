#pragma once

// Cyclic cubic fields, their log-unit lattices in the zero-sum plane, and a
// check that a rank-2 lattice is equilateral triangular.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "unitlat/biquad.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

/// Dense polynomial with rational coefficients, lowest degree first.
using QPoly = std::vector<mpq_class>;

namespace poly {

inline void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline QPoly scale(QPoly a, const mpq_class& c) {
  for (auto& x : a) x *= c;
  trim(a);
  return a;
}

/// Remainder of a modulo the monic polynomial m.
inline QPoly rem_monic(QPoly a, const QPoly& m) {
  trim(a);
  const size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const mpq_class lead = a.back();
    const size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) a[shift + i] -= lead * m[i];
    trim(a);
  }
  return a;
}

/// f(g(x)) by Horner.
inline QPoly compose(const QPoly& f, const QPoly& g) {
  QPoly r;
  for (size_t i = f.size(); i-- > 0;) r = add(mul(r, g), QPoly{f[i]});
  return r;
}

inline Real eval(const QPoly& p, const Real& x) {
  Real r(x.bits());
  for (size_t i = p.size(); i-- > 0;) r = r * x + Real(p[i], x.bits());
  return r;
}

}  // namespace poly

struct SimplestCubic {
  long a = 0;
};

/// Monic x^3 + b x^2 + c x + d with a caller-supplied unit u0 + u1 t + u2 t^2
/// in a root t.
struct ExplicitPoly {
  std::array<mpz_class, 3> bcd;
  std::array<mpz_class, 3> unit{0, 1, 0};
};

using CubicSpec = std::variant<SimplestCubic, ExplicitPoly>;

inline mpz_class cubic_discriminant(const mpz_class& b, const mpz_class& c, const mpz_class& d) {
  return b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
}

class CyclicCubicField {
 public:
  static CyclicCubicField simplest(long a) {
    if (a < -1000000 || a > 1000000) throw PreconditionError("parameter a out of range");
    CyclicCubicField F(SimplestCubic{a}, {mpz_class(-a), mpz_class(-(a + 3)), mpz_class(-1)}, {0, 1, 0});
    return F;
  }

  static CyclicCubicField explicit_poly(const mpz_class& b, const mpz_class& c, const mpz_class& d,
                                        const std::array<mpz_class, 3>& unit = {0, 1, 0}) {
    return CyclicCubicField(ExplicitPoly{{b, c, d}, unit}, {b, c, d}, unit);
  }

  const CubicSpec& spec() const { return spec_; }
  /// Coefficients lowest degree first, monic.
  const QPoly& polynomial() const { return f_; }
  const QPoly& unit() const { return unit_; }
  const mpz_class& discriminant() const { return disc_; }
  /// Exact norm of the unit.
  const mpq_class& unit_norm() const { return norm_; }
  std::string describe() const;

 private:
  CyclicCubicField(CubicSpec spec, const std::array<mpz_class, 3>& bcd, const std::array<mpz_class, 3>& u)
      : spec_(std::move(spec)) {
    const auto& [b, c, d] = bcd;
    f_ = {mpq_class(d), mpq_class(c), mpq_class(b), mpq_class(1)};
    disc_ = cubic_discriminant(b, c, d);
    if (disc_ == 0) throw PreconditionError("polynomial has a repeated root");
    if (!is_perfect_square(disc_)) {
      throw PreconditionError("discriminant " + disc_.get_str() + " is not a square; the field is not cyclic");
    }
    unit_ = {mpq_class(u[0]), mpq_class(u[1]), mpq_class(u[2])};
    poly::trim(unit_);
    norm_ = norm_of(unit_);
    if (norm_ != 1 && norm_ != -1) {
      throw PreconditionError("supplied element has norm " + norm_.get_str() + ", not a unit");
    }
  }

  // Determinant of multiplication by g on the basis 1, t, t^2.
  mpq_class norm_of(const QPoly& g) const {
    std::array<std::array<mpq_class, 3>, 3> m{};
    for (size_t j = 0; j < 3; ++j) {
      QPoly basis(j + 1);
      basis[j] = 1;
      QPoly col = poly::rem_monic(poly::mul(g, basis), f_);
      for (size_t i = 0; i < col.size(); ++i) m[i][j] = col[i];
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  CubicSpec spec_;
  QPoly f_;
  QPoly unit_;
  mpz_class disc_;
  mpq_class norm_;
};

inline std::string CyclicCubicField::describe() const {
  std::string s = "x^3";
  const char* names[] = {"", "x", "x^2"};
  for (size_t i = 3; i-- > 0;) {
    if (f_[i] == 0) continue;
    s += f_[i] > 0 ? " + " : " - ";
    mpq_class c = abs(f_[i]);
    if (c != 1 || i == 0) s += c.get_str();
    s += names[i];
  }
  return s;
}

struct CubicRoots {
  /// Sorted descending.
  std::array<Real, 3> roots;
  /// Each root lies within this distance of the reported value.
  Real error_bound;
};

namespace detail {

// Bisection for a sign change of f on [lo, hi].
inline Real bisect_root(const QPoly& f, Real lo, Real hi, long target_exp) {
  int slo = poly::eval(f, lo).sign();
  for (;;) {
    Real mid = (lo + hi) / 2L;
    Real width = hi - lo;
    if (width.is_zero() || width.exponent() < target_exp) return mid;
    int s = poly::eval(f, mid).sign();
    if (s == 0) return mid;
    if (s == slo) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
}

}  // namespace detail

/// Real roots by sign-change isolation between the critical points followed
/// by bisection to 2^-(bits + 8) relative to the Cauchy bound. The reported
/// error bound also covers rounding the roots to `bits`.
inline CubicRoots cubic_roots(const CyclicCubicField& F, Bits bits) {
  const QPoly& f = F.polynomial();
  const Bits work(bits.value + kGuardBits);
  // Cauchy bound 1 + max |coefficient|.
  mpq_class m = 0;
  for (size_t i = 0; i < 3; ++i) m = std::max(m, mpq_class(abs(f[i])));
  const Real B(mpq_class(m + 1), work);
  // Critical points of f: 3x^2 + 2 b x + c = 0.
  const Real b(f[2], work), c(f[1], work);
  const Real disc = square(b) * 4L - c * 12L;
  if (!(disc.sign() > 0)) throw PreconditionError("polynomial does not have three real roots");
  const Real s = sqrt(disc);
  const Real c1 = (-b * 2L - s) / 6L, c2 = (-b * 2L + s) / 6L;
  const Real v1 = poly::eval(f, c1), v2 = poly::eval(f, c2);
  if (!(v1.sign() > 0 && v2.sign() < 0)) throw PreconditionError("polynomial does not have three real roots");
  const long target = B.exponent() - bits.value - 8;
  CubicRoots out{{detail::bisect_root(f, c2, B, target), detail::bisect_root(f, c1, c2, target),
                  detail::bisect_root(f, -B, c1, target)},
                 Real::pow2(B.exponent() - bits.value, bits)};
  for (auto& r : out.roots) r = Real(r, bits);
  return out;
}

// ---------------------------------------------------------------------------
// Galois action

struct GaloisAction {
  /// sigma maps root i to root perm[i].
  std::array<int, 3> perm{};
  /// sigma(t) = g(t) with g in Q[t], certified by f | f(g).
  QPoly g;
};

namespace detail {

// Lagrange interpolation of the values y at the nodes x, degree <= 2,
// then rational reconstruction of each coefficient.
inline std::optional<QPoly> interpolate_rational(const std::array<Real, 3>& x, const std::array<Real, 3>& y,
                                                 const mpz_class& den_bound) {
  const Bits bits = x[0].bits();
  std::array<Real, 3> coef{Real(bits), Real(bits), Real(bits)};
  for (size_t i = 0; i < 3; ++i) {
    const size_t j = (i + 1) % 3, k = (i + 2) % 3;
    Real w = y[i] / ((x[i] - x[j]) * (x[i] - x[k]));
    coef[2] += w;
    coef[1] -= w * (x[j] + x[k]);
    coef[0] += w * x[j] * x[k];
  }
  QPoly g;
  for (const auto& c : coef) g.push_back(reconstruct_rational(to_rational(c), den_bound));
  return g;
}

}  // namespace detail

/// The Galois generator as a certified root permutation. For the simplest
/// cubic, sigma(t) = -1/(1+t); otherwise the cycle r0 -> r1 -> r2 -> r0 of
/// the sorted roots. In both cases sigma(t) = g(t) for a quadratic g found by
/// interpolation and checked exactly.
inline GaloisAction galois_action(const CyclicCubicField& F, const CubicRoots& R) {
  const Bits bits = R.roots[0].bits();
  GaloisAction act;
  if (std::holds_alternative<SimplestCubic>(F.spec())) {
    const Real tol = R.error_bound * 64L;
    for (size_t i = 0; i < 3; ++i) {
      Real img = Real(-1L, bits) / (R.roots[i] + Real(1L, bits));
      int found = -1;
      for (size_t j = 0; j < 3; ++j) {
        if (abs(img - R.roots[j]) <= tol * (abs(img) + Real(1L, bits)) * 4L) found = static_cast<int>(j);
      }
      if (found < 0) throw Error("sigma(t) = -1/(1+t) does not permute the roots");
      act.perm[i] = found;
    }
  } else {
    act.perm = {1, 2, 0};
  }
  const auto& p = act.perm;
  if (p[0] == 0 || p[1] == 1 || p[2] == 2 || p[static_cast<size_t>(p[0])] == 0) {
    throw Error("root permutation is not a 3-cycle");
  }
  // sigma^2 must be the remaining 3-cycle, i.e. sigma^3 = id.
  for (size_t i = 0; i < 3; ++i) {
    if (p[static_cast<size_t>(p[static_cast<size_t>(p[i])])] != static_cast<int>(i)) {
      throw Error("root permutation does not have order 3");
    }
  }
  std::array<Real, 3> images{R.roots[static_cast<size_t>(p[0])], R.roots[static_cast<size_t>(p[1])],
                             R.roots[static_cast<size_t>(p[2])]};
  auto g = detail::interpolate_rational(R.roots, images, abs(F.discriminant()));
  if (!g) throw Error("could not recover the Galois map");
  QPoly fg = poly::rem_monic(poly::compose(F.polynomial(), *g), F.polynomial());
  if (!fg.empty()) {
    throw Error("root permutation is not induced by a field automorphism at this precision");
  }
  act.g = std::move(*g);
  return act;
}

// ---------------------------------------------------------------------------
// Rank-2 lattices in R^n

struct PlaneLattice {
  /// Two generators of equal ambient dimension.
  std::array<std::vector<Real>, 2> gen;

  Bits bits() const { return gen[0][0].bits(); }
  size_t dim() const { return gen[0].size(); }
};

inline Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s(a[0].bits());
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<Real> combine(const PlaneLattice& L, const mpz_class& x, const mpz_class& y) {
  std::vector<Real> v;
  const Bits bits = L.bits();
  for (size_t i = 0; i < L.dim(); ++i) v.push_back(L.gen[0][i] * Real(x, bits) + L.gen[1][i] * Real(y, bits));
  return v;
}

inline PlaneLattice make_plane_lattice(std::vector<Real> g1, std::vector<Real> g2) {
  if (g1.empty() || g1.size() != g2.size()) throw PreconditionError("generators must share a dimension");
  PlaneLattice L{{std::move(g1), std::move(g2)}};
  const Real g11 = dot(L.gen[0], L.gen[0]), g22 = dot(L.gen[1], L.gen[1]), g12 = dot(L.gen[0], L.gen[1]);
  const Real det = g11 * g22 - square(g12);
  if (!(det > equality_tolerance(L.bits()) * g11 * g22)) {
    throw PreconditionError("generators are linearly dependent");
  }
  return L;
}

struct CubicLogLattice {
  PlaneLattice lattice;
  GaloisAction sigma;
  CubicRoots roots;
  /// Log(eps), Log(sigma eps), Log(sigma^2 eps).
  std::array<std::vector<Real>, 3> logs;
  /// |sum of coordinates| of each log vector.
  std::array<Real, 3> zero_sum_residual;
  /// max |Log eps + Log sigma eps + Log sigma^2 eps|.
  Real galois_residual;
};

/// Log vectors of the unit and its conjugate, in embedding order of the
/// sorted roots.
inline CubicLogLattice log_lattice(const CyclicCubicField& F, Bits bits) {
  CubicRoots R = cubic_roots(F, bits);
  GaloisAction s = galois_action(F, R);
  std::array<Real, 3> emb{poly::eval(F.unit(), R.roots[0]), poly::eval(F.unit(), R.roots[1]),
                          poly::eval(F.unit(), R.roots[2])};
  const Real one(1L, bits);
  const Real tol = equality_tolerance(bits);
  for (const auto& e : emb) {
    if (abs(abs(e) - one) <= tol) throw PreconditionError("unit has an embedding equal to +-1; Log is degenerate");
  }
  std::array<std::vector<Real>, 3> logs;
  for (size_t i = 0; i < 3; ++i) logs[0].push_back(log(abs(emb[i])));
  // (sigma eps) at embedding i is eps at root perm[i].
  for (size_t k = 1; k < 3; ++k) {
    for (size_t i = 0; i < 3; ++i) logs[k].push_back(logs[k - 1][static_cast<size_t>(s.perm[i])]);
  }
  std::array<Real, 3> zs{Real(bits), Real(bits), Real(bits)};
  Real galois(bits);
  for (size_t k = 0; k < 3; ++k) zs[k] = abs(logs[k][0] + logs[k][1] + logs[k][2]);
  for (size_t i = 0; i < 3; ++i) galois = max(galois, abs(logs[0][i] + logs[1][i] + logs[2][i]));
  PlaneLattice L = make_plane_lattice(logs[0], logs[1]);
  return {std::move(L), std::move(s), std::move(R), std::move(logs), std::move(zs), std::move(galois)};
}

// ---------------------------------------------------------------------------
// Equilateral check

enum class Verdict { Equilateral, NotEquilateral };

inline std::string to_string(Verdict v) { return v == Verdict::Equilateral ? "Equilateral" : "NotEquilateral"; }

struct CubicLatticeReport {
  Verdict verdict = Verdict::NotEquilateral;
  /// Shortest vector and its coefficients on the input generators.
  std::vector<Real> v1;
  std::array<mpz_class, 2> v1_coeffs;
  /// v1 rotated by pi/3 in the lattice plane.
  std::vector<Real> rotated;
  /// The lattice vector nearest to the rotation, and its coefficients.
  std::vector<Real> v2;
  std::array<mpz_class, 2> v2_coeffs;
  Real ratio;
  Real angle;
  /// Distance of the rotation's coordinates from integers.
  Real membership_residual;
  /// Distance of the rotated input generators' coordinates from integers.
  Real hexagonal_closure;
  /// Distance of the input generators' coordinates on {v1, v2} from integers.
  Real generation_residual;
  /// det of the coefficient matrix of (v1, v2).
  mpz_class coeff_det;
  /// Gram matrix of (v1, v2) divided by |v1|^2: (g11, g12, g22).
  std::array<Real, 3> normalized_gram;
  std::vector<std::string> failures;
};

struct ShortestVectorOptions {
  long extra_bound = 0;
};

namespace detail {

inline mpz_class ceil_to_integer(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDU);
  return z;
}

// Coordinates of v on the basis (a, b) of its plane, from the Gram system.
inline std::array<Real, 2> coordinates(const std::vector<Real>& a, const std::vector<Real>& b,
                                       const std::vector<Real>& v) {
  const Real g11 = dot(a, a), g12 = dot(a, b), g22 = dot(b, b);
  const Real r1 = dot(a, v), r2 = dot(b, v);
  const Real det = g11 * g22 - square(g12);
  return {(r1 * g22 - r2 * g12) / det, (r2 * g11 - r1 * g12) / det};
}

inline Real integrality_residual(const std::array<Real, 2>& c) {
  Real r(c[0].bits());
  for (const auto& x : c) r = max(r, abs(x - Real(round_to_integer(x), x.bits())));
  return r;
}

inline std::vector<Real> rotate_in_plane(const std::vector<Real>& v, const std::vector<Real>& other) {
  // Unit vector e2 orthogonal to v in span(v, other).
  const Real vv = dot(v, v);
  const Real t = dot(other, v) / vv;
  std::vector<Real> e2;
  for (size_t i = 0; i < v.size(); ++i) e2.push_back(other[i] - v[i] * t);
  const Real n2 = sqrt(dot(e2, e2));
  const Real len = sqrt(vv);
  const Real h = sqrt(Real(3L, len.bits())) / 2L;
  std::vector<Real> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(v[i] / 2L + e2[i] / n2 * len * h);
  return out;
}

}  // namespace detail

struct ShortestVector {
  std::vector<Real> v;
  std::array<mpz_class, 2> coeffs;
  /// Per-axis coefficient bound used.
  mpz_class bound;
};

/// Shortest nonzero vector by enumeration over |x|, |y| <= N, where N comes
/// from Cramer's rule applied to a vector no longer than the shorter
/// generator. Ties within tolerance go to the lexicographically largest
/// coefficient pair.
inline ShortestVector shortest_vector(const PlaneLattice& L, const ShortestVectorOptions& opts = {}) {
  const Real g11 = dot(L.gen[0], L.gen[0]), g22 = dot(L.gen[1], L.gen[1]);
  const Real det = g11 * g22 - square(dot(L.gen[0], L.gen[1]));
  const Real r2 = min(g11, g22);
  const mpz_class N = detail::ceil_to_integer(sqrt(r2 * max(g11, g22) / det)) + opts.extra_bound;
  const long n = N.get_si();
  if (n > 100000) throw Error("enumeration bound too large; reduce the basis first");
  const Real tol = equality_tolerance(L.bits());
  std::optional<Real> best;
  std::array<mpz_class, 2> arg{};
  for (long x = -n; x <= n; ++x) {
    for (long y = -n; y <= n; ++y) {
      if (x == 0 && y == 0) continue;
      auto v = combine(L, x, y);
      Real nv = dot(v, v);
      if (!best || nv < *best * (Real(1L, L.bits()) - tol)) {
        best = nv;
        arg = {x, y};
      } else if (nv <= *best * (Real(1L, L.bits()) + tol)) {
        // Tie: keep the lexicographically largest pair.
        if (std::make_pair(mpz_class(x), mpz_class(y)) > std::make_pair(arg[0], arg[1])) arg = {x, y};
      }
    }
  }
  return {combine(L, arg[0], arg[1]), arg, N};
}

/// Equilateral iff the pi/3 rotation of the shortest vector is a lattice
/// vector, the nearest lattice vector has the same length at angle pi/3, and
/// the two vectors generate the lattice. Residuals are in basis coordinates.
inline CubicLatticeReport check_equilateral(const PlaneLattice& L, const Real& tolerance) {
  const Bits bits = L.bits();
  CubicLatticeReport rep;
  auto sv = shortest_vector(L);
  rep.v1 = sv.v;
  rep.v1_coeffs = sv.coeffs;
  // Rotate within the plane, using whichever generator is independent of v1.
  const auto& other = sv.coeffs[1] != 0 ? L.gen[0] : L.gen[1];
  rep.rotated = detail::rotate_in_plane(rep.v1, other);

  auto c = detail::coordinates(L.gen[0], L.gen[1], rep.rotated);
  rep.membership_residual = detail::integrality_residual(c);
  rep.v2_coeffs = {round_to_integer(c[0]), round_to_integer(c[1])};
  rep.v2 = combine(L, rep.v2_coeffs[0], rep.v2_coeffs[1]);

  const Real n1 = dot(rep.v1, rep.v1);
  const Real n2 = dot(rep.v2, rep.v2);
  const Real ip = dot(rep.v1, rep.v2);
  rep.ratio = sqrt(n2 / n1);
  if (n2.is_zero()) {
    rep.angle = Real(bits);
  } else {
    Real cosang = ip / sqrt(n1 * n2);
    cosang = min(max(cosang, Real(-1L, bits)), Real(1L, bits));
    rep.angle = acos(cosang);
  }
  rep.normalized_gram = {Real(1L, bits), ip / n1, n2 / n1};

  rep.coeff_det = sv.coeffs[0] * rep.v2_coeffs[1] - sv.coeffs[1] * rep.v2_coeffs[0];
  if (rep.coeff_det != 0) {
    Real gen_res(bits);
    for (const auto& g : L.gen) gen_res = max(gen_res, detail::integrality_residual(detail::coordinates(rep.v1, rep.v2, g)));
    rep.generation_residual = gen_res;
  } else {
    rep.generation_residual = Real(1L, bits);
  }

  Real closure(bits);
  for (size_t k = 0; k < 2; ++k) {
    auto rg = detail::rotate_in_plane(L.gen[k], L.gen[1 - k]);
    closure = max(closure, detail::integrality_residual(detail::coordinates(L.gen[0], L.gen[1], rg)));
  }
  rep.hexagonal_closure = closure;

  const Real one(1L, bits);
  const Real third = Real::pi(bits) / 3L;
  if (!(rep.membership_residual < tolerance)) rep.failures.push_back("rotation of v1 is not a lattice vector");
  if (!(abs(rep.ratio - one) <= tolerance)) rep.failures.push_back("|v2| / |v1| differs from 1");
  if (!(abs(rep.angle - third) <= tolerance)) rep.failures.push_back("angle between v1 and v2 differs from pi/3");
  if (abs(rep.coeff_det) != 1 || !(rep.generation_residual < tolerance)) {
    rep.failures.push_back("v1 and v2 do not generate the lattice");
  }
  rep.verdict = rep.failures.empty() ? Verdict::Equilateral : Verdict::NotEquilateral;
  return rep;
}

}  // namespace unitlat
