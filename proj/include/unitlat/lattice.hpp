#pragma once

// Log-unit lattices of real biquadratic fields, modelled exactly by integer
// coefficient vectors over the half-frame (w1/2, w2/2, w3/2). The w_i are
// pairwise orthogonal with |w_i| = 2 R_i, so the Gram form of coefficient
// vectors a, b is sum_i a_i b_i R_i^2.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitlat/biquad.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/quadratic.hpp"
#include "unitlat/real.hpp"

namespace unitlat {

inline std::string to_string(const Triple& t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + ")";
}

struct LogLattice {
  /// Frame lengths: the frame vector at position i has length 2 R[i].
  std::array<Real, 3> R;
  /// Basis rows in half-frame coordinates.
  std::array<Triple, 3> basis{};
  std::optional<FieldType> type;
  /// Subfield (0-based) whose w sits at each frame position.
  std::array<int, 3> frame_subfield{0, 1, 2};

  Bits bits() const { return R[0].bits(); }
  long det() const { return detail::det3(basis); }

  /// Whether u is an integer combination of the basis rows.
  bool contains(const Triple& u) const {
    // Solve basis^T x = u by Cramer's rule.
    const long D = det();
    for (size_t k = 0; k < 3; ++k) {
      auto m = basis;
      for (size_t i = 0; i < 3; ++i) m[k][i] = u[i];
      if (detail::det3(m) % D != 0) return false;
    }
    return true;
  }

  Real norm2(const Triple& u) const {
    Real s(bits());
    for (size_t i = 0; i < 3; ++i) s += square(R[i]) * (u[i] * u[i]);
    return s;
  }
};

/// Validating constructor for lattices with arbitrary integer bases.
inline LogLattice make_lattice(std::array<Real, 3> R, std::array<Triple, 3> basis,
                               std::optional<FieldType> type = std::nullopt,
                               std::array<int, 3> frame_subfield = {0, 1, 2}) {
  for (const auto& r : R) {
    if (!(r.sign() > 0)) throw PreconditionError("frame lengths must be positive");
  }
  if (detail::det3(basis) == 0) throw PreconditionError("basis vectors are linearly dependent");
  return LogLattice{std::move(R), basis, std::move(type), frame_subfield};
}

struct GramValue {
  Real value;
  /// The termwise products (a1 b1, a2 b2, a3 b3).
  Triple structural;
  bool structurally_zero() const { return structural == Triple{0, 0, 0}; }
};

inline GramValue gram(const LogLattice& lat, const Triple& a, const Triple& b) {
  Triple s{a[0] * b[0], a[1] * b[1], a[2] * b[2]};
  Real v(lat.bits());
  for (size_t i = 0; i < 3; ++i) v += square(lat.R[i]) * s[i];
  return {std::move(v), s};
}

namespace detail {

inline bool definitely_less(const Real& a, const Real& b, const Real& tol) { return a + tol < b; }

/// Permutation sorting the three lengths ascending; throws on ties.
inline std::array<int, 3> ascending_order(const std::array<Real, 3>& R, const std::vector<int>& idx) {
  std::vector<int> order = idx;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return R[static_cast<size_t>(a)] < R[static_cast<size_t>(b)]; });
  Real scale = R[0];
  for (const auto& r : R) scale = max(scale, r);
  const Real tol = equality_tolerance(R[0].bits()) * scale;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    if (!definitely_less(R[static_cast<size_t>(order[i])], R[static_cast<size_t>(order[i + 1])], tol)) {
      throw TieBreakFailure("frame lengths R" + std::to_string(order[i] + 1) + " and R" +
                            std::to_string(order[i + 1] + 1) + " tie at working precision");
    }
  }
  std::array<int, 3> out{0, 1, 2};
  for (size_t i = 0; i < order.size(); ++i) out[i] = order[i];
  return out;
}

}  // namespace detail

/// Canonical basis of the unit lattice for a classified type, given the
/// regulators in subfield order.
///
///   Ia  (2,0,0) (0,2,0) (0,0,2)          identity frame
///   Ib  (1,0,0) (0,2,0) (0,0,2)          frame (k, i, j), k the halved unit
///   Ic  (1,0,0) (0,1,0) (0,0,2)          frame (i, j, k)
///   IIa (1,1,0) (0,2,0) (0,0,2)          frame (i, j, k), R_i < R_j
///   IIb (1,1,0) (0,2,0) (0,0,1)          frame (i, j, k), R_i < R_j
///   III (0,1,1) (1,0,1) (1,1,0)          frame sorted by R
///   IV  (1,1,1) (0,2,0) (0,0,2)          frame sorted by R
inline LogLattice build_lattice(const FieldType& type, const std::array<Real, 3>& R_subfield) {
  std::array<int, 3> frame = type.perm;
  std::array<Triple, 3> basis{};
  switch (type.tag) {
    case UnitType::Ia:
      frame = {0, 1, 2};
      basis = {Triple{2, 0, 0}, Triple{0, 2, 0}, Triple{0, 0, 2}};
      break;
    case UnitType::Ib: basis = {Triple{1, 0, 0}, Triple{0, 2, 0}, Triple{0, 0, 2}}; break;
    case UnitType::Ic: basis = {Triple{1, 0, 0}, Triple{0, 1, 0}, Triple{0, 0, 2}}; break;
    case UnitType::IIa:
    case UnitType::IIb: {
      auto pair = detail::ascending_order(R_subfield, {type.perm[0], type.perm[1]});
      frame = {pair[0], pair[1], type.perm[2]};
      basis = {Triple{1, 1, 0}, Triple{0, 2, 0},
               Triple{0, 0, type.tag == UnitType::IIa ? 2L : 1L}};
      break;
    }
    case UnitType::III:
      frame = detail::ascending_order(R_subfield, {0, 1, 2});
      basis = {Triple{0, 1, 1}, Triple{1, 0, 1}, Triple{1, 1, 0}};
      break;
    case UnitType::IV:
      frame = detail::ascending_order(R_subfield, {0, 1, 2});
      basis = {Triple{1, 1, 1}, Triple{0, 2, 0}, Triple{0, 0, 2}};
      break;
  }
  std::array<Real, 3> R{R_subfield[static_cast<size_t>(frame[0])],
                        R_subfield[static_cast<size_t>(frame[1])],
                        R_subfield[static_cast<size_t>(frame[2])]};
  return make_lattice(std::move(R), basis, type, frame);
}

inline std::array<Real, 3> field_regulators(const BiquadField& K, Bits bits) {
  return {regulator(K.unit(0), bits), regulator(K.unit(1), bits), regulator(K.unit(2), bits)};
}

inline LogLattice build_lattice(const BiquadField& K, const FieldType& type, Bits bits) {
  return build_lattice(type, field_regulators(K, bits));
}

// ---------------------------------------------------------------------------
// Successive minima

struct LatticeVector {
  Triple u;
  Real norm2;
};

struct MinimaReport {
  std::array<Real, 3> lambda;
  std::array<Triple, 3> achieving{};
  /// Index pairs (i, j) of achieving vectors whose termwise products vanish.
  std::vector<std::pair<int, int>> structurally_orthogonal_pairs;
  /// Every enumerated nonzero lattice vector, sorted by norm.
  std::vector<LatticeVector> vectors;
  /// Per-axis coefficient bound actually searched.
  Triple box{};
};

struct EnumerationOptions {
  /// Added to the box bound (used by the bound-insensitivity checks).
  long extra_bound = 0;
  /// Restrict each axis to |u_i| <= n_i, the least n_i > 0 with n_i e_i in the
  /// lattice. Any u with |u_i| >= n_i, u != +-n_i e_i, is the sum of the two
  /// strictly shorter lattice vectors u -+ n_i e_i and +-n_i e_i, so it never
  /// raises the span dimension and never belongs to an orthogonal basis.
  bool cap_by_exponent = true;
};

namespace detail {

inline long axis_exponent(const LogLattice& lat, size_t i) {
  const long D = std::abs(lat.det());
  for (long n = 1; n <= D; ++n) {
    Triple u{0, 0, 0};
    u[i] = n;
    if (lat.contains(u)) return n;
  }
  return D;
}

inline Triple cross(const Triple& a, const Triple& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline int rank_of(const std::vector<Triple>& vs) {
  if (vs.empty()) return 0;
  if (vs.size() == 1) return vs[0] == Triple{0, 0, 0} ? 0 : 1;
  if (vs.size() == 2) return cross(vs[0], vs[1]) == Triple{0, 0, 0} ? 1 : 2;
  return det3({vs[0], vs[1], vs[2]}) == 0 ? 2 : 3;
}

}  // namespace detail

/// Enumeration bound from the basis lengths and the shortest frame vector:
/// ceil(2 max|b| / min 2R) + 1.
inline long enumeration_bound(const LogLattice& lat) {
  Real max_len(lat.bits());
  for (const auto& b : lat.basis) max_len = max(max_len, sqrt(lat.norm2(b)));
  Real min_R = min(min(lat.R[0], lat.R[1]), lat.R[2]);
  Real q = max_len / min_R;
  mpz_class c;
  mpfr_get_z(c.get_mpz_t(), q.get(), MPFR_RNDU);
  return c.get_si() + 1;
}

inline MinimaReport successive_minima(const LogLattice& lat, const EnumerationOptions& opts = {}) {
  const long U = enumeration_bound(lat) + opts.extra_bound;
  Triple box{U, U, U};
  if (opts.cap_by_exponent) {
    for (size_t i = 0; i < 3; ++i) box[i] = std::min(U, detail::axis_exponent(lat, i) + opts.extra_bound);
  }
  MinimaReport rep{{Real(lat.bits()), Real(lat.bits()), Real(lat.bits())}, {}, {}, {}, box};
  for (long a = -box[0]; a <= box[0]; ++a) {
    for (long b = -box[1]; b <= box[1]; ++b) {
      for (long c = -box[2]; c <= box[2]; ++c) {
        Triple u{a, b, c};
        if (u == Triple{0, 0, 0} || !lat.contains(u)) continue;
        rep.vectors.push_back({u, lat.norm2(u)});
      }
    }
  }
  std::stable_sort(rep.vectors.begin(), rep.vectors.end(), [](const LatticeVector& x, const LatticeVector& y) {
    if (x.norm2 < y.norm2) return true;
    if (y.norm2 < x.norm2) return false;
    return x.u > y.u;
  });
  std::vector<Triple> chosen;
  for (const auto& v : rep.vectors) {
    auto trial = chosen;
    trial.push_back(v.u);
    if (detail::rank_of(trial) > static_cast<int>(chosen.size())) {
      rep.lambda[chosen.size()] = sqrt(v.norm2);
      rep.achieving[chosen.size()] = v.u;
      chosen.push_back(v.u);
      if (chosen.size() == 3) break;
    }
  }
  if (chosen.size() < 3) throw Error("successive_minima: enumeration did not reach rank 3");
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (gram(lat, rep.achieving[static_cast<size_t>(i)], rep.achieving[static_cast<size_t>(j)])
              .structurally_zero()) {
        rep.structurally_orthogonal_pairs.emplace_back(i, j);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Orthogonality

struct OrthogonalityDecision {
  bool orthogonal = false;
  /// An orthogonal basis (half-frame coordinates), when one exists.
  std::optional<std::array<Triple, 3>> basis;
  /// For non-orthogonal lattices: a lambda_1 / lambda_2 achieving pair and
  /// its inner product.
  std::optional<std::pair<Triple, Triple>> witness_pair;
  std::optional<Real> witness_inner;
  std::string witness;
  MinimaReport minima;
};

/// Decides whether the lattice has a pairwise orthogonal basis. Any
/// orthogonal basis, sorted by length, has lengths lambda_1..3, so the search
/// runs over triples of enumerated vectors with those norms. Orthogonality of
/// a pair is decided structurally; a numerically vanishing inner product
/// with nonzero termwise products raises NumericAmbiguity.
inline OrthogonalityDecision is_orthogonal(const LogLattice& lat) {
  OrthogonalityDecision out;
  out.minima = successive_minima(lat);
  const auto& mr = out.minima;
  const Bits bits = lat.bits();
  const Real rel = equality_tolerance(bits);

  std::array<std::vector<Triple>, 3> shells;
  for (size_t k = 0; k < 3; ++k) {
    const Real target = square(mr.lambda[k]);
    const Real tol = rel * target;
    for (const auto& v : mr.vectors) {
      if (abs(v.norm2 - target) <= tol) shells[k].push_back(v.u);
    }
  }

  auto orthogonal_pair = [&](const Triple& a, const Triple& b) {
    auto g = gram(lat, a, b);
    if (g.structurally_zero()) return true;
    Real scale(bits);
    for (size_t i = 0; i < 3; ++i) scale += square(lat.R[i]) * std::abs(g.structural[i]);
    if (abs(g.value) <= rel * scale) {
      throw NumericAmbiguity("inner product of " + to_string(a) + " and " + to_string(b) +
                             " vanishes numerically but not structurally");
    }
    return false;
  };

  const long D = std::abs(lat.det());
  for (const auto& a : shells[0]) {
    for (const auto& b : shells[1]) {
      if (a == b || !orthogonal_pair(a, b)) continue;
      for (const auto& c : shells[2]) {
        if (c == a || c == b) continue;
        if (!orthogonal_pair(a, c) || !orthogonal_pair(b, c)) continue;
        if (std::abs(detail::det3({a, b, c})) == D) {
          out.orthogonal = true;
          out.basis = std::array<Triple, 3>{a, b, c};
          return out;
        }
      }
    }
  }

  out.witness_pair = std::make_pair(mr.achieving[0], mr.achieving[1]);
  out.witness_inner = gram(lat, mr.achieving[0], mr.achieving[1]).value;
  out.witness = "no pairwise orthogonal triple with norms (lambda1, lambda2, lambda3) generates the lattice";
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient sets and short-vector candidates for types III and IV, in the
// R-sorted frame.

/// Congruence description of {u : sum u_i w^_i / 2 in the lattice}.
inline bool in_congruence_set(UnitType tag, const Triple& u) {
  auto par = [](long x) { return ((x % 2) + 2) % 2; };
  if (tag == UnitType::III) return par(u[0] + u[1] + u[2]) == 0;
  if (tag == UnitType::IV) return par(u[0]) == par(u[1]) && par(u[1]) == par(u[2]);
  throw PreconditionError("congruence sets are defined for types III and IV");
}

/// The candidate set for the two shortest independent vectors.
inline std::vector<Triple> short_vector_candidates(UnitType tag) {
  if (tag == UnitType::III) {
    return {Triple{0, 1, 1}, Triple{1, 0, 1}, Triple{1, 1, 0}, Triple{0, 1, -1},
            Triple{1, 0, -1}, Triple{1, -1, 0}, Triple{2, 0, 0}, Triple{0, 2, 0}};
  }
  if (tag == UnitType::IV) {
    return {Triple{1, 1, 1}, Triple{-1, 1, 1}, Triple{1, -1, 1}, Triple{1, 1, -1},
            Triple{2, 0, 0}, Triple{0, 2, 0}};
  }
  throw PreconditionError("candidate sets are defined for types III and IV");
}

inline bool in_candidates_up_to_sign(UnitType tag, const Triple& u) {
  const Triple neg{-u[0], -u[1], -u[2]};
  for (const auto& s : short_vector_candidates(tag)) {
    if (s == u || s == neg) return true;
  }
  return false;
}

}  // namespace unitlat
