#pragma once

// Discriminant bounds on quadratic regulators, and the fundamental box and
// covering radius of orthogonal log-unit lattices of Q(sqrt p1, sqrt p2).

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>

#include "unitlat/biquad.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/lattice.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

namespace detail {

inline void require_discriminant(const mpz_class& Delta) {
  if (Delta < 5) throw PreconditionError("discriminant must be >= 5, got " + Delta.get_str());
}

}  // namespace detail

/// log((sqrt(Delta - 4) + sqrt(Delta)) / 2), the smallest possible regulator.
inline Real delta_tilde(const mpz_class& Delta, Bits bits) {
  detail::require_discriminant(Delta);
  Bits work(bits.value + kGuardBits);
  Real v = log((sqrt(Real(mpz_class(Delta - 4), work)) + sqrt(Real(Delta, work))) / 2L);
  return Real(v, bits);
}

/// sqrt(Delta / 2) (log(Delta) / 2 + 1), an upper bound for the regulator.
inline Real delta_hat(const mpz_class& Delta, Bits bits) {
  detail::require_discriminant(Delta);
  Bits work(bits.value + kGuardBits);
  Real D(Delta, work);
  Real v = sqrt(D / 2L) * (log(D) / 2L + Real(1, work));
  return Real(v, bits);
}

inline Real delta_tilde(long Delta, Bits bits) { return delta_tilde(mpz_class(Delta), bits); }
inline Real delta_hat(long Delta, Bits bits) { return delta_hat(mpz_class(Delta), bits); }

/// True iff log(u) equals delta_tilde(disc) exactly: writing the unit as
/// (X + Y sqrt Delta) / 2, this happens iff Y = 1 and X^2 = Delta - 4.
inline bool regulator_meets_lower_bound(const QuadUnit& u) {
  const long d = u.d.value();
  const long Delta = discriminant(u.d);
  mpz_class X, Y;
  if (Delta == d) {
    X = u.q == 2 ? u.x : mpz_class(2 * u.x);
    Y = u.q == 2 ? u.y : mpz_class(2 * u.y);
  } else {
    X = 2 * u.x;
    Y = u.y;
  }
  return Y == 1 && X * X == Delta - 4;
}

/// Ordering of a value against an interval [lower, upper).
struct IntervalCheck {
  Real value;
  Real lower;
  Real upper;
  /// lower == value, certified exactly rather than numerically.
  bool lower_tie = false;
  bool lower_ok = false;
  bool upper_ok = false;
  bool ok() const { return lower_ok && upper_ok; }
};

namespace detail {

/// Numeric strict comparison a < b with a margin; ties must be certified.
inline bool strictly_below(const Real& a, const Real& b) {
  const Real tol = equality_tolerance(a.bits()) * max(abs(a), abs(b));
  return a + tol < b;
}

inline IntervalCheck check_interval(Real value, Real lower, Real upper, bool tie) {
  IntervalCheck c{std::move(value), std::move(lower), std::move(upper), tie, false, false};
  c.lower_ok = tie || strictly_below(c.lower, c.value);
  c.upper_ok = strictly_below(c.value, c.upper);
  return c;
}

}  // namespace detail

/// Checks delta_tilde(Delta) <= R(d) < delta_hat(Delta).
inline IntervalCheck regulator_bounds_check(SquarefreeD d, Bits bits) {
  const QuadUnit u = fundamental_unit(d);
  const mpz_class Delta(discriminant(d));
  return detail::check_interval(regulator(u, bits), delta_tilde(Delta, bits), delta_hat(Delta, bits),
                                regulator_meets_lower_bound(u));
}

// ---------------------------------------------------------------------------
// Type I hypotheses on a pair of primes

struct Hypothesis {
  /// 1: p1 = 1 mod 4, p2 != 3 mod 4, e1 = e2 = -1, e3 = 1.
  /// 2: p1 = 3 mod 4, p2 = 2.
  int which = 0;
  /// True when the field's (d1, d2) play the roles (p2, p1).
  bool swapped = false;
};

inline bool hypothesis_holds(int which, std::int64_t p1, std::int64_t p2, const std::array<int, 3>& e) {
  if (!is_prime(p1) || !is_prime(p2) || p1 == p2) return false;
  if (which == 1) return p1 % 4 == 1 && p2 % 4 != 3 && e[0] == -1 && e[1] == -1 && e[2] == 1;
  if (which == 2) return p1 % 4 == 3 && p2 == 2;
  throw PreconditionError("hypothesis must be 1 or 2");
}

/// The Type I hypothesis satisfied by the field, trying both orders.
inline std::optional<Hypothesis> detect_hypothesis(const BiquadField& K) {
  const auto e = K.norms();
  for (int which : {1, 2}) {
    if (hypothesis_holds(which, K.d1(), K.d2(), e)) return Hypothesis{which, false};
    if (hypothesis_holds(which, K.d2(), K.d1(), {e[1], e[0], e[2]})) return Hypothesis{which, true};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fundamental box and covering radius

/// Lower or upper covering-radius bound from per-role bound values t:
/// hypothesis 1: (t1^2 + t2^2 + t3^2 / 4)^(1/2);
/// hypothesis 2: (t1^2 / 4 + t2^2 + t3^2 / 4)^(1/2).
inline Real rho_bound(const std::array<Real, 3>& t, int which) {
  Real s = square(t[1]) + square(t[2]) / 4L;
  if (which == 1) return sqrt(s + square(t[0]));
  if (which == 2) return sqrt(s + square(t[0]) / 4L);
  throw PreconditionError("hypothesis must be 1 or 2");
}

/// Box multiplier of each role's regulator: l_k = factor[k] * R_k.
inline std::array<long, 3> box_factors(int which) {
  if (which == 1) return {2, 2, 1};
  if (which == 2) return {1, 2, 1};
  throw PreconditionError("hypothesis must be 1 or 2");
}

struct BoundsReport {
  int hypothesis = 0;
  bool swapped = false;
  /// Subfield index (0-based, field order) behind each role p1, p2, p1 p2.
  std::array<int, 3> role_subfield{0, 1, 2};
  std::array<mpz_class, 3> Delta;
  std::array<Real, 3> Delta_tilde;
  std::array<Real, 3> Delta_hat;
  /// Box multipliers per role ("2R" or "R").
  std::array<long, 3> factor{};
  /// Box dimensions per role, measured on the orthogonal basis.
  std::array<IntervalCheck, 3> box;
  /// Box dimensions sorted ascending.
  std::array<Real, 3> box_sorted;
  IntervalCheck rho;
  bool passed() const { return box[0].ok() && box[1].ok() && box[2].ok() && rho.ok(); }
};

/// Bounds for a Type I field under the given hypothesis. The box dimensions
/// are read off the orthogonal basis found by the lattice search, and must
/// match the multipliers the hypothesis predicts.
inline BoundsReport box_and_rho(const BiquadField& K, const FieldType& type,
                                const std::array<Real, 3>& R_subfield, int which) {
  if (which != 1 && which != 2) throw PreconditionError("hypothesis must be 1 or 2");
  const auto e = K.norms();
  std::optional<Hypothesis> h;
  if (hypothesis_holds(which, K.d1(), K.d2(), e)) {
    h = Hypothesis{which, false};
  } else if (hypothesis_holds(which, K.d2(), K.d1(), {e[1], e[0], e[2]})) {
    h = Hypothesis{which, true};
  }
  if (!h) {
    throw HypothesisNotSatisfied("Q(sqrt " + std::to_string(K.d1()) + ", sqrt " + std::to_string(K.d2()) +
                                 ") does not satisfy hypothesis " + std::to_string(which));
  }
  if (!is_type_one(type.tag)) {
    throw HypothesisNotSatisfied("field is of type " + to_string(type.tag) + ", not type I");
  }

  const LogLattice lat = build_lattice(type, R_subfield);
  const auto decision = is_orthogonal(lat);
  if (!decision.orthogonal) throw Error("type I lattice has no orthogonal basis");

  BoundsReport rep;
  rep.hypothesis = which;
  rep.swapped = h->swapped;
  rep.role_subfield = h->swapped ? std::array<int, 3>{1, 0, 2} : std::array<int, 3>{0, 1, 2};
  rep.factor = box_factors(which);
  const Bits bits = lat.bits();

  // Length of the basis vector on each subfield axis.
  std::array<std::optional<Real>, 3> by_subfield;
  std::array<long, 3> mult_by_subfield{};
  for (const auto& u : *decision.basis) {
    int axis = -1;
    for (int j = 0; j < 3; ++j) {
      if (u[static_cast<size_t>(j)] != 0) {
        if (axis >= 0) throw Error("orthogonal basis vector " + to_string(u) + " is not on a frame axis");
        axis = j;
      }
    }
    const int s = lat.frame_subfield[static_cast<size_t>(axis)];
    const long c = std::abs(u[static_cast<size_t>(axis)]);
    by_subfield[static_cast<size_t>(s)] = lat.R[static_cast<size_t>(axis)] * c;
    mult_by_subfield[static_cast<size_t>(s)] = c;
  }

  std::array<Real, 3> lengths{Real(bits), Real(bits), Real(bits)};
  for (size_t k = 0; k < 3; ++k) {
    const auto s = static_cast<size_t>(rep.role_subfield[k]);
    if (mult_by_subfield[s] != rep.factor[k]) {
      throw Error("orthogonal basis has multiplier " + std::to_string(mult_by_subfield[s]) + " on role " +
                  std::to_string(k + 1) + ", hypothesis predicts " + std::to_string(rep.factor[k]));
    }
    const QuadUnit& u = K.unit(static_cast<int>(s));
    rep.Delta[k] = discriminant(u.d);
    rep.Delta_tilde[k] = delta_tilde(rep.Delta[k], bits);
    rep.Delta_hat[k] = delta_hat(rep.Delta[k], bits);
    lengths[k] = *by_subfield[s];
    rep.box[k] = detail::check_interval(lengths[k], rep.Delta_tilde[k] * rep.factor[k],
                                        rep.Delta_hat[k] * rep.factor[k], regulator_meets_lower_bound(u));
  }
  rep.box_sorted = lengths;
  std::sort(rep.box_sorted.begin(), rep.box_sorted.end(),
            [](const Real& a, const Real& b) { return a < b; });

  const Real rho = sqrt(square(lengths[0]) + square(lengths[1]) + square(lengths[2])) / 2L;
  const bool all_tie = rep.box[0].lower_tie && rep.box[1].lower_tie && rep.box[2].lower_tie;
  rep.rho = detail::check_interval(rho, rho_bound(rep.Delta_tilde, which), rho_bound(rep.Delta_hat, which),
                                   all_tie);
  return rep;
}

}  // namespace unitlat
