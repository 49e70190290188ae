#include <gtest/gtest.h>

#include <cmath>

#include "unitlat/cubic.hpp"

using namespace unitlat;

namespace {

const Bits kBits{256};

Real tol(double x) { return Real(x, kBits); }

std::vector<Real> vec(std::initializer_list<Real> xs) { return std::vector<Real>(xs); }

// Integer polynomial helpers, lowest degree first.
using IPoly = std::vector<long>;

IPoly imul(const IPoly& a, const IPoly& b) {
  IPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

IPoly iadd(IPoly a, const IPoly& b, long scale) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

double dot_d(const std::vector<Real>& a, const std::vector<Real>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].to_double() * b[i].to_double();
  return s;
}

}  // namespace

TEST(CubicField, Validation) {
  EXPECT_THROW(CyclicCubicField::explicit_poly(0, 0, -2), PreconditionError);  // disc -108
  EXPECT_EQ(cubic_discriminant(0, 0, -2), -108);
  EXPECT_THROW(CyclicCubicField::explicit_poly(0, 0, 0), PreconditionError);   // repeated root
  EXPECT_THROW(CyclicCubicField::explicit_poly(1, -2, -1, {2, 0, 0}), PreconditionError);
  auto F = CyclicCubicField::simplest(-1);
  EXPECT_EQ(F.discriminant(), 49);
  EXPECT_EQ(F.describe(), "x^3 + x^2 - 2x - 1");
  EXPECT_EQ(mpq_class(abs(F.unit_norm())), 1);
  // Discriminant of the simplest cubic is (a^2 + 3a + 9)^2.
  for (long a = -5; a <= 30; ++a) {
    const long s = a * a + 3 * a + 9;
    EXPECT_EQ(CyclicCubicField::simplest(a).discriminant(), s * s) << a;
  }
}

TEST(CubicRoots, CosineIdentity) {
  auto R = cubic_roots(CyclicCubicField::simplest(-1), kBits);
  const Real two_pi = Real::pi(kBits) * 2L;
  for (size_t k = 0; k < 3; ++k) {
    Real expect = cos(two_pi * static_cast<long>(k + 1) / 7L) * 2L;
    EXPECT_LT(abs(R.roots[k] - expect).to_double(), 1e-70) << k;
  }
  EXPECT_NEAR(R.roots[0].to_double(), 1.24698, 1e-5);
  EXPECT_NEAR(R.roots[1].to_double(), -0.44504, 1e-5);
  EXPECT_NEAR(R.roots[2].to_double(), -1.80194, 1e-5);
}

TEST(CubicRoots, SimplestWithZeroParameter) {
  auto R = cubic_roots(CyclicCubicField::simplest(0), kBits);
  EXPECT_NEAR(R.roots[0].to_double(), 1.87939, 1e-5);
  EXPECT_NEAR(R.roots[1].to_double(), -0.34730, 1e-5);
  EXPECT_NEAR(R.roots[2].to_double(), -1.53209, 1e-5);
  for (const auto& r : R.roots) {
    EXPECT_LT(abs(r * r * r - r * 3L - Real(1L, kBits)).to_double(), 1e-70);
  }
}

TEST(CubicRoots, ErrorBoundHolds) {
  for (long a : {-1L, 0L, 5L, 20L, 1000L}) {
    auto F = CyclicCubicField::simplest(a);
    auto R = cubic_roots(F, kBits);
    for (const auto& root : R.roots) {
      // f changes sign across [r - e, r + e], evaluated well above the root precision.
      const Bits wide{1024};
      const Real r(root, wide), e(R.error_bound, wide);
      auto lo = poly::eval(F.polynomial(), r - e);
      auto hi = poly::eval(F.polynomial(), r + e);
      EXPECT_LE(lo.sign() * hi.sign(), 0) << "a=" << a;
    }
  }
}

// (1+x)^3 f(-1/(1+x)) = -1 - a(1+x) + (a+3)(1+x)^2 - (1+x)^3 equals -f(x).
TEST(Galois, SimplestCubicSubstitution) {
  for (long a = -10; a <= 30; ++a) {
    const IPoly one_x{1, 1};
    const IPoly sq = imul(one_x, one_x), cube = imul(sq, one_x);
    IPoly lhs{-1};
    lhs = iadd(lhs, one_x, -a);
    lhs = iadd(lhs, sq, a + 3);
    lhs = iadd(lhs, cube, -1);
    const IPoly minus_f{1, a + 3, a, -1};
    EXPECT_EQ(lhs, minus_f) << "a=" << a;
  }
}

TEST(Galois, MapIsCertified) {
  for (long a : {-1L, 0L, 1L, 2L, 3L, 5L, 10L, 20L}) {
    auto F = CyclicCubicField::simplest(a);
    auto act = galois_action(F, cubic_roots(F, kBits));
    // (1 + t) g(t) + 1 vanishes mod f, so g(t) = -1/(1+t) in the field.
    QPoly h = poly::add(poly::mul({1, 1}, act.g), {1});
    EXPECT_TRUE(poly::rem_monic(h, F.polynomial()).empty()) << "a=" << a;
    EXPECT_TRUE(poly::rem_monic(poly::compose(F.polynomial(), act.g), F.polynomial()).empty());
  }
  auto G = CyclicCubicField::explicit_poly(1, -2, -1);
  auto act = galois_action(G, cubic_roots(G, kBits));
  // 2cos(2x) = (2cos x)^2 - 2 for the roots 2cos(2 pi k / 7).
  EXPECT_EQ(act.g, (QPoly{-2, 0, 1}));
  EXPECT_EQ(act.perm, (std::array<int, 3>{1, 2, 0}));
}

TEST(LogLattice, ZeroSumAndStability) {
  for (long a : {-1L, 0L, 1L, 2L, 3L, 5L, 10L, 20L}) {
    auto F = CyclicCubicField::simplest(a);
    auto L = log_lattice(F, kBits);
    for (const auto& z : L.zero_sum_residual) EXPECT_LT(z.to_double(), 1e-70) << "a=" << a;
    EXPECT_LT(L.galois_residual.to_double(), 1e-70);
    // Log(sigma eps) is Log(eps) with coordinates permuted by the cycle.
    for (size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(L.logs[1][i], L.logs[0][static_cast<size_t>(L.sigma.perm[i])]);
    }
    // Independent Gram check in double precision: equal lengths at 120 degrees.
    const double g11 = dot_d(L.logs[0], L.logs[0]), g22 = dot_d(L.logs[1], L.logs[1]);
    const double g12 = dot_d(L.logs[0], L.logs[1]);
    EXPECT_NEAR(g22 / g11, 1.0, 1e-12);
    EXPECT_NEAR(g12 / g11, -0.5, 1e-12);
  }
}

TEST(LogLattice, DegenerateUnit) {
  EXPECT_THROW(log_lattice(CyclicCubicField::explicit_poly(1, -2, -1, {1, 0, 0}), kBits), PreconditionError);
  EXPECT_THROW(log_lattice(CyclicCubicField::explicit_poly(1, -2, -1, {-1, 0, 0}), kBits), PreconditionError);
}

TEST(Equilateral, Prototype) {
  const Real h = sqrt(Real(3L, kBits)) / 2L;
  auto L = make_plane_lattice(vec({Real(1L, kBits), Real(0L, kBits), Real(0L, kBits)}),
                              vec({Real(1L, kBits) / 2L, h, Real(0L, kBits)}));
  auto r = check_equilateral(L, tol(1e-30));
  EXPECT_EQ(r.verdict, Verdict::Equilateral);
  EXPECT_LT(abs(r.ratio - Real(1L, kBits)).to_double(), 1e-60);

  // Same lattice embedded in a tilted plane of R^3.
  const Real s = sqrt(Real(2L, kBits)) / 2L;
  auto M = make_plane_lattice(vec({s, s, Real(0L, kBits)}), vec({s / 2L, s / 2L, h}));
  EXPECT_EQ(check_equilateral(M, tol(1e-30)).verdict, Verdict::Equilateral);
}

TEST(Equilateral, SquareLatticeIsNot) {
  auto L = make_plane_lattice(vec({Real(1L, kBits), Real(0L, kBits)}), vec({Real(0L, kBits), Real(1L, kBits)}));
  auto r = check_equilateral(L, tol(1e-30));
  EXPECT_EQ(r.verdict, Verdict::NotEquilateral);
  EXPECT_FALSE(r.failures.empty());
  // A sublattice of the hexagonal lattice of index 2 is not equilateral.
  const Real h = sqrt(Real(3L, kBits)) / 2L;
  auto M = make_plane_lattice(vec({Real(2L, kBits), Real(0L, kBits)}), vec({Real(1L, kBits) / 2L, h}));
  EXPECT_EQ(check_equilateral(M, tol(1e-30)).verdict, Verdict::NotEquilateral);
}

TEST(Equilateral, DependentGeneratorsRejected) {
  EXPECT_THROW(make_plane_lattice(vec({Real(1L, kBits), Real(2L, kBits)}), vec({Real(2L, kBits), Real(4L, kBits)})),
               PreconditionError);
  EXPECT_THROW(make_plane_lattice(vec({Real(1L, kBits)}), vec({Real(2L, kBits), Real(4L, kBits)})),
               PreconditionError);
}

TEST(Equilateral, SimplestCubicsAndSimilarity) {
  std::vector<std::array<Real, 3>> grams;
  for (long a : {-1L, 0L, 1L, 2L, 3L, 5L, 10L, 20L}) {
    auto L = log_lattice(CyclicCubicField::simplest(a), kBits);
    auto r = check_equilateral(L.lattice, tol(1e-30));
    EXPECT_EQ(r.verdict, Verdict::Equilateral) << "a=" << a;
    EXPECT_LT(abs(r.angle - Real::pi(kBits) / 3L).to_double(), 1e-30);
    EXPECT_LT(abs(r.ratio - Real(1L, kBits)).to_double(), 1e-30);
    grams.push_back(r.normalized_gram);
  }
  for (size_t i = 1; i < grams.size(); ++i) {
    for (size_t k = 0; k < 3; ++k) EXPECT_LT(abs(grams[i][k] - grams[0][k]).to_double(), 1e-20);
  }
}

TEST(Equilateral, ExplicitPolynomial) {
  auto L = log_lattice(CyclicCubicField::explicit_poly(1, -2, -1), kBits);
  EXPECT_EQ(check_equilateral(L.lattice, tol(1e-30)).verdict, Verdict::Equilateral);
}

TEST(ShortestVector, StableUnderLargerBound) {
  for (long a : {-1L, 3L, 20L}) {
    auto L = log_lattice(CyclicCubicField::simplest(a), kBits).lattice;
    auto base = shortest_vector(L);
    auto wide = shortest_vector(L, ShortestVectorOptions{base.bound.get_si()});
    EXPECT_LT(abs(dot(base.v, base.v) - dot(wide.v, wide.v)).to_double(), 1e-60);
    EXPECT_EQ(base.coeffs, wide.coeffs);
  }
}
