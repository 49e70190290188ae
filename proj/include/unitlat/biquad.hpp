#pragma once

// Real biquadratic fields K = Q(sqrt d1, sqrt d2): exact arithmetic over the
// basis {1, sqrt d1, sqrt d2, sqrt(d1 d2)}, the Galois action, square roots
// in K and the classification of the unit group into types Ia..IV.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitlat/errors.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

using UnitSource = std::function<QuadUnit(SquarefreeD)>;

class BiquadField {
 public:
  /// d1, d2 distinct squarefree with d1*d2 not a square. Units are taken
  /// from `source` (defaults to the continued-fraction solver).
  static BiquadField make(std::int64_t d1, std::int64_t d2, const UnitSource& source = {}) {
    auto s1 = SquarefreeD::make(d1);
    auto s2 = SquarefreeD::make(d2);
    if (d1 == d2) throw PreconditionError("d1 and d2 must be distinct");
    auto [core, cofactor] = squarefree_decompose(d1 * d2);
    if (core == 1) throw PreconditionError("d1*d2 is a square");
    auto s3 = SquarefreeD::make(core);
    auto get = [&](SquarefreeD d) { return source ? source(d) : fundamental_unit(d); };
    return BiquadField(s1, s2, s3, cofactor, {get(s1), get(s2), get(s3)});
  }

  SquarefreeD d1() const { return d_[0]; }
  SquarefreeD d2() const { return d_[1]; }
  /// Squarefree core of d1*d2.
  SquarefreeD d3() const { return d_[2]; }
  /// d1*d2 = m^2 * d3.
  std::int64_t m() const { return m_; }
  /// d of subfield i (0-based: Q(sqrt d1), Q(sqrt d2), Q(sqrt d3)).
  SquarefreeD d(int i) const { return d_.at(static_cast<size_t>(i)); }
  const QuadUnit& unit(int i) const { return units_.at(static_cast<size_t>(i)); }
  std::array<int, 3> norms() const { return {units_[0].norm, units_[1].norm, units_[2].norm}; }
  std::int64_t d1d2() const { return d_[0].value() * d_[1].value(); }
  /// Field discriminant, the product of the three quadratic discriminants.
  mpz_class discriminant() const {
    return mpz_class(static_cast<long>(unitlat::discriminant(d_[0]))) *
           static_cast<long>(unitlat::discriminant(d_[1])) *
           static_cast<long>(unitlat::discriminant(d_[2]));
  }

 private:
  BiquadField(SquarefreeD d1, SquarefreeD d2, SquarefreeD d3, std::int64_t m,
              std::array<QuadUnit, 3> units)
      : d_{d1, d2, d3}, m_(m), units_(std::move(units)) {}

  std::array<SquarefreeD, 3> d_;
  std::int64_t m_;
  std::array<QuadUnit, 3> units_;
};

/// c0 + c1 sqrt d1 + c2 sqrt d2 + c3 sqrt(d1 d2), with sqrt(d1 d2) the
/// positive root of the product (not of its squarefree core).
struct BiquadElement {
  std::array<mpq_class, 4> c{0, 0, 0, 0};

  static BiquadElement one() { return BiquadElement{{1, 0, 0, 0}}; }
  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
  friend bool operator==(const BiquadElement& a, const BiquadElement& b) { return a.c == b.c; }
  friend BiquadElement operator-(BiquadElement a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  std::string to_string() const {
    return "(" + c[0].get_str() + ", " + c[1].get_str() + ", " + c[2].get_str() + ", " +
           c[3].get_str() + ")";
  }
};

inline BiquadElement add(const BiquadElement& a, const BiquadElement& b) {
  BiquadElement r;
  for (size_t i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

inline BiquadElement mul(const BiquadElement& a, const BiquadElement& b, const BiquadField& K) {
  const mpq_class d1(static_cast<long>(K.d1().value()));
  const mpq_class d2(static_cast<long>(K.d2().value()));
  const auto& x = a.c;
  const auto& y = b.c;
  BiquadElement r;
  r.c[0] = x[0] * y[0] + d1 * x[1] * y[1] + d2 * x[2] * y[2] + d1 * d2 * x[3] * y[3];
  r.c[1] = x[0] * y[1] + x[1] * y[0] + d2 * (x[2] * y[3] + x[3] * y[2]);
  r.c[2] = x[0] * y[2] + x[2] * y[0] + d1 * (x[1] * y[3] + x[3] * y[1]);
  r.c[3] = x[0] * y[3] + x[3] * y[0] + x[1] * y[2] + x[2] * y[1];
  return r;
}

// Generators of Gal(K/Q): sigma negates sqrt d1, tau negates sqrt d2.
inline BiquadElement sigma(BiquadElement a) {
  a.c[1] = -a.c[1];
  a.c[3] = -a.c[3];
  return a;
}
inline BiquadElement tau(BiquadElement a) {
  a.c[2] = -a.c[2];
  a.c[3] = -a.c[3];
  return a;
}
inline BiquadElement sigma_tau(const BiquadElement& a) { return sigma(tau(a)); }

/// Signs of (sqrt d1, sqrt d2, sqrt(d1 d2)) under the embeddings in the
/// order (id, tau, sigma, sigma tau) used by the Log map.
inline constexpr std::array<std::array<int, 3>, 4> kEmbeddingSigns{{
    {+1, +1, +1},
    {+1, -1, -1},
    {-1, +1, -1},
    {-1, -1, +1},
}};

/// The four real embeddings (id, tau, sigma, sigma tau) at `bits`.
inline std::array<Real, 4> embeddings(const BiquadElement& a, const BiquadField& K, Bits bits) {
  const std::array<Real, 3> roots{sqrt(Real(static_cast<long>(K.d1().value()), bits)),
                                  sqrt(Real(static_cast<long>(K.d2().value()), bits)),
                                  sqrt(Real(static_cast<long>(K.d1d2()), bits))};
  std::array<Real, 3> terms{Real(a.c[1], bits) * roots[0], Real(a.c[2], bits) * roots[1],
                            Real(a.c[3], bits) * roots[2]};
  std::array<Real, 4> out{Real(bits), Real(bits), Real(bits), Real(bits)};
  for (size_t g = 0; g < 4; ++g) {
    Real v(a.c[0], bits);
    for (size_t k = 0; k < 3; ++k) {
      v += kEmbeddingSigns[g][k] > 0 ? terms[k] : -terms[k];
    }
    out[g] = std::move(v);
  }
  return out;
}

/// Coerces a unit of subfield `which` (1, 2 or 3) into K.
inline BiquadElement embed_unit(const QuadUnit& u, int which, const BiquadField& K) {
  if (which < 1 || which > 3) throw PreconditionError("subfield index must be 1, 2 or 3");
  if (u.d != K.d(which - 1)) throw PreconditionError("unit does not belong to that subfield");
  BiquadElement e;
  e.c[0] = mpq_class(u.x, u.q);
  mpq_class y(u.y, u.q);
  y.canonicalize();
  e.c[0].canonicalize();
  if (which == 3) {
    // y sqrt d3 = (y / m) sqrt(d1 d2)
    e.c[3] = y / mpq_class(static_cast<long>(K.m()));
  } else {
    e.c[static_cast<size_t>(which)] = y;
  }
  return e;
}

/// prod eps_i^{u_i} for u in {0,1}^3 (subfield order).
inline BiquadElement unit_product(const std::array<int, 3>& u, const BiquadField& K) {
  BiquadElement r = BiquadElement::one();
  for (int i = 0; i < 3; ++i) {
    if (u[static_cast<size_t>(i)] % 2 != 0) r = mul(r, embed_unit(K.unit(i), i + 1, K), K);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Square roots

enum class SqrtStatus { Root, NotASquare, InsufficientPrecision };

struct SqrtResult {
  SqrtStatus status;
  std::optional<BiquadElement> root;
};

namespace detail {

inline long bit_size(const mpz_class& z) {
  return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

// Best continued-fraction convergent of x with denominator <= bound.
inline mpq_class reconstruct_rational(mpq_class x, const mpz_class& bound) {
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  mpq_class best(0);
  for (;;) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    if (k > bound) break;
    best = mpq_class(h, k);
    best.canonicalize();
    h2 = std::move(h1);
    h1 = std::move(h);
    k2 = std::move(k1);
    k1 = std::move(k);
    mpq_class frac = x - mpq_class(a);
    if (frac == 0) break;
    x = 1 / frac;
  }
  return best;
}

}  // namespace detail

/// Precision at which sqrt_in_K decides NotASquare reliably for `a`.
inline Bits sqrt_required_bits(const BiquadElement& a, const BiquadField& K) {
  long b = 1;
  for (const auto& x : a.c) {
    b = std::max(b, detail::bit_size(x.get_num()) + detail::bit_size(x.get_den()));
  }
  long bound_bits = detail::bit_size(4 * K.discriminant());
  long d_bits = detail::bit_size(mpz_class(static_cast<long>(K.d1d2())));
  return Bits(4 * b + 2 * bound_bits + d_bits + 64);
}

/// One attempt at `bits`: numeric square roots of the four embeddings over
/// all sign patterns, rational reconstruction of the coordinates, exact
/// verification of y*y == a.
inline SqrtResult sqrt_in_K_at(const BiquadElement& a, const BiquadField& K, Bits bits) {
  if (a.is_zero()) throw PreconditionError("sqrt_in_K: zero element");
  const bool decisive = bits >= sqrt_required_bits(a, K);
  auto emb = embeddings(a, K, bits);

  long max_exp = 0;
  for (const auto& x : a.c) {
    if (x != 0) max_exp = std::max(max_exp, Real(x, Bits(64)).exponent());
  }
  const long root_exp = detail::bit_size(mpz_class(static_cast<long>(K.d1d2())));
  const Real err = Real::pow2(max_exp + root_exp + 4 - bits.value, bits);
  for (const auto& v : emb) {
    if (v < -err) return {SqrtStatus::NotASquare, std::nullopt};
    if (!(v > err)) {
      if (decisive) return {SqrtStatus::NotASquare, std::nullopt};
      return {SqrtStatus::InsufficientPrecision, std::nullopt};
    }
  }

  std::array<Real, 4> r{sqrt(emb[0]), sqrt(emb[1]), sqrt(emb[2]), sqrt(emb[3])};
  const std::array<Real, 3> inv_roots{
      Real(1L, bits) / sqrt(Real(static_cast<long>(K.d1().value()), bits)),
      Real(1L, bits) / sqrt(Real(static_cast<long>(K.d2().value()), bits)),
      Real(1L, bits) / sqrt(Real(static_cast<long>(K.d1d2()), bits))};
  const mpz_class bound = 4 * K.discriminant();

  for (int pattern = 0; pattern < 8; ++pattern) {
    // y_id is fixed positive; the other three signs range over all choices.
    std::array<Real, 4> y{r[0], r[1], r[2], r[3]};
    for (int g = 1; g < 4; ++g) {
      if (pattern & (1 << (g - 1))) y[static_cast<size_t>(g)] = -y[static_cast<size_t>(g)];
    }
    BiquadElement cand;
    for (size_t k = 0; k < 4; ++k) {
      // Row k of the inverse embedding matrix: sum over g of sign * y_g / 4.
      Real s(bits);
      for (size_t g = 0; g < 4; ++g) {
        int sg = k == 0 ? 1 : kEmbeddingSigns[g][k - 1];
        s += sg > 0 ? y[g] : -y[g];
      }
      s = s / 4L;
      if (k > 0) s *= inv_roots[k - 1];
      cand.c[k] = detail::reconstruct_rational(to_rational(s), bound);
    }
    if (mul(cand, cand, K) == a) return {SqrtStatus::Root, cand};
  }
  if (decisive) return {SqrtStatus::NotASquare, std::nullopt};
  return {SqrtStatus::InsufficientPrecision, std::nullopt};
}

struct SqrtOutcome {
  std::optional<BiquadElement> root;
  Bits bits_used;
};

/// Square root in K with precision doubling from `start` up to `cap`.
/// Throws PrecisionExhausted when the cap is reached undecided.
inline SqrtOutcome sqrt_in_K(const BiquadElement& a, const BiquadField& K,
                             Bits start = kDefaultBits, Bits cap = kMaxBits) {
  for (Bits bits = start; bits <= cap; bits = bits.doubled()) {
    auto r = sqrt_in_K_at(a, K, bits);
    if (r.status == SqrtStatus::Root) return {r.root, bits};
    if (r.status == SqrtStatus::NotASquare) return {std::nullopt, bits};
  }
  throw PrecisionExhausted("sqrt_in_K: undecided at " + std::to_string(cap.value) + " bits");
}

// ---------------------------------------------------------------------------
// Unit types

enum class UnitType { Ia, Ib, Ic, IIa, IIb, III, IV };

inline std::string to_string(UnitType t) {
  switch (t) {
    case UnitType::Ia: return "Ia";
    case UnitType::Ib: return "Ib";
    case UnitType::Ic: return "Ic";
    case UnitType::IIa: return "IIa";
    case UnitType::IIb: return "IIb";
    case UnitType::III: return "III";
    case UnitType::IV: return "IV";
  }
  return "?";
}

inline std::optional<UnitType> parse_unit_type(const std::string& s) {
  for (auto t : {UnitType::Ia, UnitType::Ib, UnitType::Ic, UnitType::IIa, UnitType::IIb,
                 UnitType::III, UnitType::IV}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

/// "I", "II", "III" or "IV".
inline std::string family(UnitType t) {
  switch (t) {
    case UnitType::Ia:
    case UnitType::Ib:
    case UnitType::Ic: return "I";
    case UnitType::IIa:
    case UnitType::IIb: return "II";
    case UnitType::III: return "III";
    case UnitType::IV: return "IV";
  }
  return "?";
}

inline bool is_type_one(UnitType t) { return family(t) == "I"; }

using Triple = std::array<long, 3>;
/// A subset of F_2^3 given by membership of the 8 vectors u (bit i = u_i).
using SquareClassSet = std::array<bool, 8>;

inline int mask_of(const std::array<int, 3>& u) {
  return (u[0] & 1) | ((u[1] & 1) << 1) | ((u[2] & 1) << 2);
}

/// A unit type together with the subscript permutation realizing it.
/// perm[k] is the subfield (0-based) that plays subscript k+1 of the
/// reference system; `system` holds the generators as half-exponent vectors
/// c over (eps1, eps2, eps3) in subfield order: Log = sum c_i w_i / 2.
struct FieldType {
  UnitType tag = UnitType::Ia;
  std::array<int, 3> perm{0, 1, 2};
  std::array<Triple, 3> system{};

  std::string family() const { return unitlat::family(tag); }
  /// Index of Lambda(w1, w2, w3) in the unit lattice.
  long index() const;
  /// The square classes u mod 2 for which eps^u is a square in K.
  SquareClassSet square_classes() const;
  /// Human-readable system in subfield subscripts, e.g. "sqrt(e1), e2, sqrt(e3)".
  std::string describe_system() const;

  friend bool operator==(const FieldType&, const FieldType&) = default;
};

namespace detail {

inline Triple unit_vec(int i, long scale) {
  Triple t{0, 0, 0};
  t[static_cast<size_t>(i)] = scale;
  return t;
}
inline Triple sum_vec(const Triple& a, const Triple& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline long det3(const std::array<Triple, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

/// Reference generator system of `tag` with subscripts relabelled by `perm`.
inline std::array<Triple, 3> reference_system(UnitType tag, const std::array<int, 3>& perm) {
  using detail::sum_vec;
  using detail::unit_vec;
  const int a = perm[0], b = perm[1], c = perm[2];
  switch (tag) {
    case UnitType::Ia: return {unit_vec(a, 2), unit_vec(b, 2), unit_vec(c, 2)};
    case UnitType::Ib: return {unit_vec(a, 1), unit_vec(b, 2), unit_vec(c, 2)};
    case UnitType::Ic: return {unit_vec(a, 1), unit_vec(b, 1), unit_vec(c, 2)};
    case UnitType::IIa: return {sum_vec(unit_vec(a, 1), unit_vec(b, 1)), unit_vec(b, 2), unit_vec(c, 2)};
    case UnitType::IIb: return {sum_vec(unit_vec(a, 1), unit_vec(b, 1)), unit_vec(b, 2), unit_vec(c, 1)};
    case UnitType::III:
      return {sum_vec(unit_vec(a, 1), unit_vec(b, 1)), sum_vec(unit_vec(b, 1), unit_vec(c, 1)),
              sum_vec(unit_vec(a, 1), unit_vec(c, 1))};
    case UnitType::IV:
      return {sum_vec(sum_vec(unit_vec(a, 1), unit_vec(b, 1)), unit_vec(c, 1)), unit_vec(b, 2),
              unit_vec(c, 2)};
  }
  return {};
}

inline FieldType make_field_type(UnitType tag, const std::array<int, 3>& perm) {
  return FieldType{tag, perm, reference_system(tag, perm)};
}

inline long FieldType::index() const { return 8 / std::abs(detail::det3(system)); }

inline SquareClassSet FieldType::square_classes() const {
  // The lattice spanned by `system` contains 2Z^3, so it is determined by
  // its image mod 2: the span of the generators.
  SquareClassSet v{};
  v[0] = true;
  for (int combo = 0; combo < 8; ++combo) {
    std::array<int, 3> u{0, 0, 0};
    for (size_t g = 0; g < 3; ++g) {
      if (combo & (1 << g)) {
        for (size_t i = 0; i < 3; ++i) u[i] += static_cast<int>(system[g][i]);
      }
    }
    v[static_cast<size_t>(mask_of(u))] = true;
  }
  return v;
}

inline std::string FieldType::describe_system() const {
  std::string out;
  for (size_t g = 0; g < 3; ++g) {
    const auto& c = system[g];
    bool half = (c[0] % 2 != 0) || (c[1] % 2 != 0) || (c[2] % 2 != 0);
    std::string word;
    for (size_t i = 0; i < 3; ++i) {
      if (c[i] == 0) continue;
      if (!word.empty()) word += "*";
      word += "e" + std::to_string(i + 1);
      long power = half ? c[i] : c[i] / 2;
      if (power != 1) word += "^" + std::to_string(power);
    }
    if (half) word = "sqrt(" + word + ")";
    if (!out.empty()) out += ", ";
    out += word;
  }
  return out;
}

/// Maps a set of square classes (a subspace of F_2^3) to its unit type.
/// Throws InconsistentClassification if the set is not one of the subspaces
/// listed in the type table.
inline FieldType type_from_square_classes(const SquareClassSet& v) {
  if (!v[0]) throw InconsistentClassification("square classes must contain 0");
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      if (v[static_cast<size_t>(a)] && v[static_cast<size_t>(b)] && !v[static_cast<size_t>(a ^ b)]) {
        throw InconsistentClassification("square classes are not closed under products");
      }
    }
  }
  std::vector<int> nonzero;
  for (int m = 1; m < 8; ++m) {
    if (v[static_cast<size_t>(m)]) nonzero.push_back(m);
  }
  auto weight = [](int m) { return __builtin_popcount(static_cast<unsigned>(m)); };
  auto bits_of = [](int m) {
    std::vector<int> idx;
    for (int i = 0; i < 3; ++i) {
      if (m & (1 << i)) idx.push_back(i);
    }
    return idx;
  };
  auto complement = [&](int m) { return bits_of(7 & ~m); };

  switch (nonzero.size()) {
    case 0: return make_field_type(UnitType::Ia, {0, 1, 2});
    case 1: {
      int m = nonzero[0];
      if (weight(m) == 1) {
        int k = bits_of(m)[0];
        auto rest = complement(m);
        return make_field_type(UnitType::Ib, {k, rest[0], rest[1]});
      }
      if (weight(m) == 2) {
        auto ij = bits_of(m);
        return make_field_type(UnitType::IIa, {ij[0], ij[1], complement(m)[0]});
      }
      return make_field_type(UnitType::IV, {0, 1, 2});
    }
    case 3: {
      std::vector<int> singles, pairs;
      for (int m : nonzero) {
        if (weight(m) == 1) singles.push_back(m);
        if (weight(m) == 2) pairs.push_back(m);
      }
      if (pairs.size() == 3) return make_field_type(UnitType::III, {0, 1, 2});
      if (singles.size() == 2) {
        int i = bits_of(singles[0])[0], j = bits_of(singles[1])[0];
        if (i > j) std::swap(i, j);
        return make_field_type(UnitType::Ic, {i, j, complement(singles[0] | singles[1])[0]});
      }
      if (singles.size() == 1 && pairs.size() == 1) {
        auto ij = bits_of(pairs[0]);
        return make_field_type(UnitType::IIb, {ij[0], ij[1], bits_of(singles[0])[0]});
      }
      break;
    }
    default: break;
  }
  throw InconsistentClassification("square classes match no unit type (" +
                                   std::to_string(nonzero.size()) + " nontrivial classes)");
}

struct Classification {
  FieldType type;
  /// square[mask] is true iff eps^u is a square in K (u encoded as a bit mask).
  SquareClassSet square{};
  /// Square roots of the classes that are squares.
  std::array<std::optional<BiquadElement>, 8> roots{};
  Bits bits_used{kDefaultBits};
};

/// Tests which of the seven products eps1^u1 eps2^u2 eps3^u3 are squares in
/// K and maps the result to the type table. Only u mod 2 matters (inverses
/// differ by squares), and -eps^u is never a square because eps_i > 0 makes
/// its identity embedding negative.
inline Classification classify(const BiquadField& K, Bits start = kDefaultBits,
                               Bits cap = kMaxBits) {
  Classification out;
  out.square[0] = true;
  out.bits_used = start;
  for (int m = 1; m < 8; ++m) {
    std::array<int, 3> u{m & 1, (m >> 1) & 1, (m >> 2) & 1};
    auto r = sqrt_in_K(unit_product(u, K), K, start, cap);
    out.square[static_cast<size_t>(m)] = r.root.has_value();
    out.roots[static_cast<size_t>(m)] = std::move(r.root);
    out.bits_used = std::max(out.bits_used, r.bits_used);
  }
  out.type = type_from_square_classes(out.square);

  // Cross-check: the system spans exactly the classes found, and its index
  // over Lambda(w) is 2^(number of independent square roots).
  if (out.type.square_classes() != out.square) {
    throw InconsistentClassification("system does not reproduce the square classes");
  }
  int count = 0;
  for (bool b : out.square) count += b ? 1 : 0;
  if (out.type.index() != count) {
    throw InconsistentClassification("lattice index disagrees with the type");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Predictions for fields Q(sqrt p1, sqrt p2), p1 != p2 prime

struct Prediction {
  /// Exact tag, except for the case that only fixes the family "II".
  std::optional<UnitType> tag;
  std::string family;
  /// Square classes (subfield order) when the case pins down the system.
  std::optional<SquareClassSet> square_classes;
  /// Which case of the congruence theorem fired (1, 2 or 3).
  int rule = 0;
  /// True when the hypothesis matched with p1 and p2 exchanged.
  bool swapped = false;

  bool matches(const FieldType& t) const {
    if (family != t.family()) return false;
    if (tag && *tag != t.tag) return false;
    if (square_classes && *square_classes != t.square_classes()) return false;
    return true;
  }
};

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

/// The three congruence cases, applied to (p1, p2) in the given order.
/// Norms are (N eps1, N eps2, N eps3).
inline std::optional<Prediction> predicted_type(std::int64_t p1, std::int64_t p2,
                                                const std::array<int, 3>& e) {
  if (!is_prime(p1) || !is_prime(p2) || p1 == p2) {
    throw PreconditionError("predicted_type needs two distinct primes");
  }
  const auto mod4 = [](std::int64_t p) { return p % 4; };
  if (mod4(p1) == 1 && mod4(p2) != 3 && e[0] == -1 && e[1] == -1) {
    if (e[2] == 1) {
      auto t = make_field_type(UnitType::Ib, {2, 0, 1});
      return Prediction{UnitType::Ib, "I", t.square_classes(), 1, false};
    }
    return Prediction{UnitType::IV, "IV", make_field_type(UnitType::IV, {0, 1, 2}).square_classes(), 1,
                      false};
  }
  if (mod4(p1) == 3 && p2 == 2) {
    auto t = make_field_type(UnitType::Ic, {0, 2, 1});
    return Prediction{UnitType::Ic, "I", t.square_classes(), 2, false};
  }
  if (mod4(p1) == 3 && mod4(p2) == 3) {
    return Prediction{std::nullopt, "II", std::nullopt, 3, false};
  }
  return std::nullopt;
}

/// predicted_type trying (p1, p2) and then (p2, p1); square classes are
/// reported in the caller's subfield order.
inline std::optional<Prediction> predicted_type_any_order(std::int64_t p1, std::int64_t p2,
                                                          const std::array<int, 3>& e) {
  if (auto p = predicted_type(p1, p2, e)) return p;
  auto p = predicted_type(p2, p1, {e[1], e[0], e[2]});
  if (!p) return std::nullopt;
  p->swapped = true;
  if (p->square_classes) {
    SquareClassSet v{};
    for (int m = 0; m < 8; ++m) {
      int swapped = (m & 4) | ((m & 1) << 1) | ((m & 2) >> 1);
      v[static_cast<size_t>(swapped)] = (*p->square_classes)[static_cast<size_t>(m)];
    }
    p->square_classes = v;
  }
  return p;
}

}  // namespace unitlat
