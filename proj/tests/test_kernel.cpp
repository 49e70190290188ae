#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "unitlat/kernel.hpp"

using namespace unitlat::kernel;

namespace {

// Full-rank square bases only: membership by Cramer's rule with a direct
// cofactor determinant, points enumerated in the ambient integer box.
std::int64_t det_small(const std::vector<Vec>& m) {
  if (m.size() == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::int64_t s = 0;
  for (size_t j = 0; j < 3; ++j) {
    std::vector<Vec> minor;
    for (size_t i = 1; i < 3; ++i) {
      Vec r;
      for (size_t k = 0; k < 3; ++k) {
        if (k != j) r.push_back(m[i][k]);
      }
      minor.push_back(r);
    }
    s += (j % 2 == 0 ? 1 : -1) * m[0][j] * det_small(minor);
  }
  return s;
}

bool member(const std::vector<Vec>& basis, const Vec& v) {
  const size_t n = basis.size();
  // Rows are basis vectors: solve x B = v, i.e. B^T x = v.
  std::vector<Vec> bt(n, Vec(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) bt[i][j] = basis[j][i];
  }
  const std::int64_t D = det_small(bt);
  for (size_t k = 0; k < n; ++k) {
    auto m = bt;
    for (size_t i = 0; i < n; ++i) m[i][k] = v[i];
    if (det_small(m) % D != 0) return false;
  }
  return true;
}

// Squared successive minima by scanning every integer point of norm at most
// the largest basis norm.
std::vector<std::int64_t> brute_minima(const std::vector<Vec>& basis) {
  const size_t n = basis.size();
  std::int64_t bound = 0;
  for (const auto& b : basis) bound = std::max(bound, dot(b, b));
  const std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(bound))) + 1;
  std::vector<Vec> pts;
  Vec v(n, -r);
  for (;;) {
    if (dot(v, v) <= bound && std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; }) && member(basis, v)) {
      pts.push_back(v);
    }
    size_t i = 0;
    while (i < n && v[i] == r) v[i++] = -r;
    if (i == n) break;
    ++v[i];
  }
  std::stable_sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return dot(a, a) < dot(b, b); });
  std::vector<Vec> chosen;
  std::vector<std::int64_t> out;
  for (const auto& p : pts) {
    auto trial = chosen;
    trial.push_back(p);
    if (rank_of(trial) == trial.size()) {
      chosen.push_back(p);
      out.push_back(dot(p, p));
    }
  }
  return out;
}

}  // namespace

TEST(Kernel, OrthogonalLengthsAreMinima) {
  IntLattice L({Vec{1, 0, 0}, Vec{0, 2, 0}, Vec{0, 0, 3}});
  auto mn = successive_minima(L);
  EXPECT_EQ(mn.lambda2, (std::vector<std::int64_t>{1, 4, 9}));
  auto bases = orthogonal_bases(L, mn);
  ASSERT_EQ(bases.size(), 1u);
}

TEST(Kernel, SquareLatticeFromSkewBasis) {
  IntLattice L({Vec{1, 0}, Vec{1, 1}});
  auto mn = successive_minima(L);
  EXPECT_EQ(mn.lambda2, (std::vector<std::int64_t>{1, 1}));
  auto bases = orthogonal_bases(L, mn);
  ASSERT_EQ(bases.size(), 1u);
  EXPECT_TRUE(same_up_to_sign_and_order(bases[0], {Vec{1, 0}, Vec{0, 1}}));
}

// (2,0) and (1,1) span {x = y mod 2}, which has the orthogonal basis
// (1,1), (1,-1) of squared length 2.
TEST(Kernel, CheckerboardLatticeIsOrthogonal) {
  IntLattice L({Vec{2, 0}, Vec{1, 1}});
  auto mn = successive_minima(L);
  EXPECT_EQ(mn.lambda2, (std::vector<std::int64_t>{2, 2}));
  auto bases = orthogonal_bases(L, mn);
  ASSERT_EQ(bases.size(), 1u);
  EXPECT_TRUE(same_up_to_sign_and_order(bases[0], {Vec{1, 1}, Vec{1, -1}}));
}

TEST(Kernel, HexagonalLatticeIsNot) {
  // (2,0) and (1,3): Gram (4, 2; 2, 10), minimal pair not orthogonal.
  IntLattice L({Vec{2, 0}, Vec{1, 3}});
  auto mn = successive_minima(L);
  EXPECT_EQ(mn.lambda2, (std::vector<std::int64_t>{4, 10}));
  EXPECT_TRUE(orthogonal_bases(L, mn).empty());
}

TEST(Kernel, DeterminantAndMembership) {
  EXPECT_EQ(determinant({{2, 1}, {1, 3}}), 5);
  EXPECT_EQ(determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}), -3);
  IntLattice L({Vec{2, 0, 0}, Vec{1, 1, 0}});
  EXPECT_TRUE(contains(L, {3, 1, 0}));
  EXPECT_FALSE(contains(L, {1, 0, 0}));
  EXPECT_FALSE(contains(L, {0, 0, 1}));
}

TEST(Kernel, LllPreservesLattice) {
  Generator gen(99);
  for (int t = 0; t < 200; ++t) {
    auto b = gen.random_basis(3, 3, 6);
    auto r = lll_reduce(b);
    EXPECT_EQ(std::abs(determinant(r)), std::abs(determinant(b)));
    for (const auto& v : r) EXPECT_TRUE(member(b, v));
  }
}

TEST(Kernel, MinimaMatchBruteForce) {
  Generator gen(1234);
  for (int t = 0; t < 300; ++t) {
    const size_t n = t % 2 == 0 ? 2 : 3;
    auto b = gen.random_basis(n, n, 4);
    IntLattice L(b);
    EXPECT_EQ(successive_minima(L).lambda2, brute_minima(b)) << describe(b);
    auto o = gen.scramble(gen.orthogonal_basis(n, n));
    EXPECT_EQ(successive_minima(IntLattice(o)).lambda2, brute_minima(o)) << describe(o);
  }
}

TEST(Kernel, GeneratorProducesOrthogonalBases) {
  Generator gen(5);
  for (int t = 0; t < 200; ++t) {
    const size_t n = static_cast<size_t>(gen.uniform(2, 4));
    const size_t m = static_cast<size_t>(gen.uniform(1, static_cast<std::int64_t>(n)));
    auto b = gen.orthogonal_basis(m, n);
    ASSERT_EQ(b.size(), m);
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = i + 1; j < m; ++j) EXPECT_EQ(dot(b[i], b[j]), 0);
    }
  }
}

TEST(Kernel, PropertySuitePasses) {
  auto rep = check_kernel_propositions(2000, 20240601);
  EXPECT_TRUE(rep.passed());
  ASSERT_EQ(rep.results.size(), 5u);
  for (const auto& r : rep.results) {
    EXPECT_GT(r.checked, 0) << r.name;
    EXPECT_EQ(r.failures, 0) << r.name << ": " << r.counterexample;
  }
}

TEST(Kernel, PropertySuiteIsDeterministic) {
  auto a = check_kernel_propositions(300, 7);
  auto b = check_kernel_propositions(300, 7);
  for (size_t i = 0; i < a.results.size(); ++i) EXPECT_EQ(a.results[i].checked, b.results[i].checked);
}
