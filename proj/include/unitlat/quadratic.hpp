#pragma once

// Real quadratic fields Q(sqrt d): continued fractions of quadratic
// irrationals, fundamental units, discriminants and regulators.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unitlat/errors.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

inline bool is_perfect_square(const mpz_class& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// n = core * cofactor^2 with core squarefree.
struct SquarefreeDecomposition {
  std::int64_t core;
  std::int64_t cofactor;
};

inline SquarefreeDecomposition squarefree_decompose(std::int64_t n) {
  if (n < 1) throw PreconditionError("squarefree_decompose: n must be positive");
  std::int64_t core = 1;
  std::int64_t cofactor = 1;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) cofactor *= p;
    if (e % 2) core *= p;
  }
  core *= rest;
  return {core, cofactor};
}

/// A squarefree integer d >= 2.
class SquarefreeD {
 public:
  static SquarefreeD make(std::int64_t d) {
    if (d < 2) throw PreconditionError("d must be >= 2, got " + std::to_string(d));
    auto [core, cofactor] = squarefree_decompose(d);
    if (cofactor != 1) {
      if (core == 1) throw PreconditionError(std::to_string(d) + " is a perfect square");
      throw PreconditionError(std::to_string(d) + " is not squarefree");
    }
    return SquarefreeD(d);
  }

  std::int64_t value() const { return d_; }
  operator std::int64_t() const { return d_; }  // NOLINT(google-explicit-constructor)
  friend bool operator==(SquarefreeD, SquarefreeD) = default;

 private:
  explicit SquarefreeD(std::int64_t d) : d_(d) {}
  std::int64_t d_;
};

/// The fundamental unit (x + y sqrt d) / q > 1 of the ring of integers.
struct QuadUnit {
  mpz_class x;
  mpz_class y;
  int q = 1;
  SquarefreeD d = SquarefreeD::make(2);
  int norm = 1;

  mpz_class norm_numerator() const { return x * x - d.value() * y * y; }
  /// (x^2 - d y^2) / q^2 == norm, exactly.
  bool satisfies_norm_equation() const {
    return norm_numerator() == mpz_class(norm) * q * q;
  }
  /// Value at the given precision.
  Real value(Bits bits) const {
    Real v = Real(x, bits) + Real(y, bits) * sqrt(Real(d.value(), bits));
    return v / static_cast<long>(q);
  }
};

/// Partial quotients [a0; a1, ..., al] of sqrt(d) over one full period;
/// the last entry equals 2 a0.
inline std::vector<mpz_class> cf_sqrt_period(std::int64_t d) {
  if (d < 2) throw PreconditionError("cf_sqrt_period: d must be >= 2");
  mpz_class D(static_cast<long>(d));
  if (is_perfect_square(D)) throw PreconditionError(std::to_string(d) + " is a perfect square");
  const mpz_class a0 = isqrt(D);
  std::vector<mpz_class> out{a0};
  mpz_class m = 0, den = 1, a = a0;
  while (a != 2 * a0) {
    m = den * a - m;
    den = (D - m * m) / den;
    a = (a0 + m) / den;
    out.push_back(a);
  }
  return out;
}

/// Continued-fraction expansion of the quadratic irrational (P + sqrt D) / Q,
/// where Q divides D - P^2.
class QuadraticIrrationalCF {
 public:
  QuadraticIrrationalCF(mpz_class P, mpz_class Q, mpz_class D)
      : P_(std::move(P)), Q_(std::move(Q)), D_(std::move(D)), s_(isqrt(D_)) {
    if (Q_ == 0 || ((D_ - P_ * P_) % Q_) != 0) {
      throw PreconditionError("QuadraticIrrationalCF: Q must divide D - P^2");
    }
  }

  /// Next partial quotient; advances the state.
  mpz_class next() {
    mpz_class num = P_ + s_;
    if (Q_ < 0) num += 1;
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q_.get_mpz_t());
    P_ = a * Q_ - P_;
    Q_ = (D_ - P_ * P_) / Q_;
    return a;
  }

 private:
  mpz_class P_, Q_, D_, s_;
};

namespace detail {

// For xi = (P0 + sqrt D) / Q0, walks convergents p/q of xi and returns the
// first unit p - q*conj(xi) = (p Q0 - q P0 + q sqrt D) / Q0 of norm +-1.
inline QuadUnit first_unit_convergent(SquarefreeD d, long P0, long Q0) {
  const mpz_class D(static_cast<long>(d.value()));
  QuadraticIrrationalCF cf(P0, Q0, D);
  mpz_class p_prev = 1, p = cf.next();
  mpz_class q_prev = 0, q = 1;
  for (;;) {
    mpz_class x = p * Q0 - q * P0;
    mpz_class n = x * x - D * q * q;
    if (n == Q0 * Q0 || n == -Q0 * Q0) {
      QuadUnit u{x, q, static_cast<int>(Q0), d, n > 0 ? 1 : -1};
      if (u.q == 2 && mpz_even_p(u.x.get_mpz_t()) && mpz_even_p(u.y.get_mpz_t())) {
        u.x /= 2;
        u.y /= 2;
        u.q = 1;
      }
      return u;
    }
    mpz_class a = cf.next();
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
}

}  // namespace detail

/// Fundamental unit > 1 of the maximal order of Q(sqrt d). For d = 1 mod 4
/// this solves x^2 - d y^2 = +-4 through the expansion of (1 + sqrt d) / 2.
inline QuadUnit fundamental_unit(SquarefreeD d) {
  if (d.value() % 4 == 1) return detail::first_unit_convergent(d, 1, 2);
  return detail::first_unit_convergent(d, 0, 1);
}

inline QuadUnit fundamental_unit(std::int64_t d) { return fundamental_unit(SquarefreeD::make(d)); }

/// Discriminant of Q(sqrt d).
inline std::int64_t discriminant(SquarefreeD d) {
  return d.value() % 4 == 1 ? d.value() : 4 * d.value();
}

inline constexpr long kGuardBits = 32;

/// log of the unit, rounded to `bits` after evaluation with guard bits.
inline Real regulator(const QuadUnit& u, Bits bits) {
  if (bits.value < 2) throw PreconditionError("invalid precision");
  Bits work(bits.value + kGuardBits);
  return Real(log(u.value(work)), bits);
}

inline Real regulator(SquarefreeD d, Bits bits) {
  if (bits.value < 2) throw PreconditionError("invalid precision");
  return regulator(fundamental_unit(d), bits);
}

}  // namespace unitlat
