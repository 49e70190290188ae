#pragma once

// Arbitrary-precision reals backed by MPFR, with the precision carried by
// each value instead of a process-wide default. Mixed-precision arithmetic
// rounds to the larger of the operand precisions.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "unitlat/errors.hpp"

namespace unitlat {

/// Working precision in bits.
struct Bits {
  mpfr_prec_t value = 256;

  constexpr Bits() = default;
  constexpr explicit Bits(mpfr_prec_t v) : value(v) {}
  constexpr Bits doubled() const { return Bits(value * 2); }
  friend constexpr auto operator<=>(Bits, Bits) = default;
};

inline constexpr Bits kDefaultBits{256};
inline constexpr Bits kMaxBits{16384};

class Real {
 public:
  explicit Real(Bits bits = kDefaultBits) {
    mpfr_init2(v_, checked(bits));
    mpfr_set_zero(v_, 1);
  }
  Real(long value, Bits bits) : Real(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(int value, Bits bits) : Real(static_cast<long>(value), bits) {}
  Real(double value, Bits bits) : Real(bits) { mpfr_set_d(v_, value, MPFR_RNDN); }
  Real(const mpz_class& value, Bits bits) : Real(bits) {
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  Real(const mpq_class& value, Bits bits) : Real(bits) {
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  /// Rounds `other` to `bits`.
  Real(const Real& other, Bits bits) : Real(bits) { mpfr_set(v_, other.v_, MPFR_RNDN); }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Bits bits() const { return Bits(mpfr_get_prec(v_)); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent() const { return is_zero() ? 0 : mpfr_get_exp(v_); }

  static Real pi(Bits bits) {
    Real r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  /// 2^e at the given precision.
  static Real pow2(long e, Bits bits) {
    Real r(1L, bits);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return apply(o, mpfr_add); }
  Real& operator-=(const Real& o) { return apply(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return apply(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return apply(o, mpfr_div); }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator*(Real a, long b) {
    mpfr_mul_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }
  friend Real operator*(long b, Real a) { return std::move(a) * b; }
  friend Real operator/(Real a, long b) {
    mpfr_div_si(a.v_, a.v_, b, MPFR_RNDN);
    return a;
  }
  friend Real operator-(Real a) {
    mpfr_neg(a.v_, a.v_, MPFR_RNDN);
    return a;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  /// Decimal rendering with `digits` significant digits. Plain positional
  /// notation for moderate exponents, scientific otherwise.
  std::string to_string(int digits = 30) const;

 private:
  static mpfr_prec_t checked(Bits bits) {
    if (bits.value < MPFR_PREC_MIN || bits.value > (1L << 24)) {
      throw PreconditionError("invalid precision: " + std::to_string(bits.value) + " bits");
    }
    return bits.value;
  }

  template <typename Op>
  Real& apply(const Real& o, Op op) {
    mpfr_prec_t p = std::max(mpfr_get_prec(v_), mpfr_get_prec(o.v_));
    if (p != mpfr_get_prec(v_)) mpfr_prec_round(v_, p, MPFR_RNDN);
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

inline Real sqrt(Real x) {
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real log(Real x) {
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real abs(Real x) {
  mpfr_abs(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real cos(Real x) {
  mpfr_cos(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real sin(Real x) {
  mpfr_sin(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real acos(Real x) {
  mpfr_acos(x.get(), x.get(), MPFR_RNDN);
  return x;
}
inline Real square(const Real& x) { return x * x; }
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

/// Relative tolerance used to call two reals equal at `bits`.
inline Real equality_tolerance(Bits bits) { return Real::pow2(-(bits.value - 24), bits); }

/// Parses a decimal literal such as "1e-30"; throws on malformed input.
inline Real parse_real(const std::string& text, Bits bits) {
  Real r(bits);
  if (text.empty() || mpfr_set_str(r.get(), text.c_str(), 10, MPFR_RNDN) != 0) {
    throw PreconditionError("not a number: '" + text + "'");
  }
  return r;
}

/// Nearest integer (ties away from zero).
inline mpz_class round_to_integer(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDNA);
  return z;
}

/// Exact value of a finite MPFR number as a rational.
inline mpq_class to_rational(const Real& x) {
  if (x.is_zero()) return mpq_class(0);
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  mpq_class q(m);
  if (e >= 0) {
    mpz_class scale;
    mpz_mul_2exp(scale.get_mpz_t(), mpz_class(1).get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    q *= scale;
  } else {
    mpz_class den;
    mpz_mul_2exp(den.get_mpz_t(), mpz_class(1).get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    q /= den;
  }
  q.canonicalize();
  return q;
}

inline std::string Real::to_string(int digits) const {
  if (digits < 1) digits = 1;
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign_str;
  if (!mant.empty() && mant[0] == '-') {
    sign_str = "-";
    mant.erase(0, 1);
  }
  // value = 0.mant * 10^exp10
  std::string out;
  if (exp10 > 0 && exp10 <= digits) {
    out = mant.substr(0, static_cast<size_t>(exp10));
    std::string frac = mant.substr(static_cast<size_t>(exp10));
    if (!frac.empty()) out += "." + frac;
  } else if (exp10 <= 0 && exp10 > -6) {
    out = "0." + std::string(static_cast<size_t>(-exp10), '0') + mant;
  } else {
    out = mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(static_cast<long>(exp10) - 1);
  }
  return sign_str + out;
}

}  // namespace unitlat
