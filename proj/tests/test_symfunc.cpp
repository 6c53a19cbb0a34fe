#include <gtest/gtest.h>

#include <algorithm>

#include "rslab/sampling.hpp"
#include "rslab/symfunc.hpp"

using namespace rslab;
using Q = Rational;
using TQ = Triple<Q>;

namespace {

TQ random_point(Rng& rng, bool allow_coincident) {
  TQ x{random_rational(rng, 7), random_rational(rng, 7), random_rational(rng, 7)};
  if (allow_coincident) {
    std::uniform_int_distribution<int> pick(0, 3);
    switch (pick(rng)) {
      case 0: x[1] = x[0]; break;
      case 1: x[2] = x[0] = x[1]; break;
      default: break;
    }
  }
  return x;
}

}  // namespace

TEST(Partition3, Validation) {
  EXPECT_THROW(Partition3(1, 2, 0), std::invalid_argument);
  EXPECT_THROW(Partition3(1, 0, -1), std::invalid_argument);
  EXPECT_EQ(partitions3_of(4).size(), 4u);
  EXPECT_EQ(partitions3_of(6).size(), 7u);
}

TEST(Schur3, Examples) {
  EXPECT_EQ(schur3(Partition3(0, 0, 0), TQ{3, 5, 7}), Q(1));
  EXPECT_EQ(schur3(Partition3(2, 1, 0), TQ{1, 1, 1}), Q(8));
  EXPECT_EQ(schur3(Partition3(1, 1, 0), TQ{1, 2, 3}), Q(11));
}

TEST(SchurTableau, Examples) {
  EXPECT_EQ(schur_tableau(Partition3(1, 0, 0), TQ{Q(2), Q(3, 4), Q(-5)}), Q(2) + Q(3, 4) - Q(5));
  EXPECT_EQ(schur_tableau(Partition3(2, 0, 0), TQ{1, 2, 0}), Q(7));
  const TQ x{Q(2), Q(-1, 3), Q(5, 7)};
  EXPECT_EQ(schur_tableau(Partition3(3, 3, 3), x), power(x[0] * x[1] * x[2], 3));
  EXPECT_THROW(schur_tableau(Partition3(13, 0, 0), x), std::invalid_argument);
}

TEST(SchurTableau, CountsMatchHookContentFormula) {
  // Number of SSYT with entries <= 3: prod (3 + content) / hook.
  auto count = [](const Partition3& l) {
    const int rows[3] = {l.l1, l.l2, l.l3};
    Q num(1), den(1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < rows[i]; ++j) {
        int leg = 0;
        for (int r = i + 1; r < 3; ++r)
          if (rows[r] > j) ++leg;
        num *= Q(3 + j - i);
        den *= Q(rows[i] - j - 1 + leg + 1);
      }
    return num / den;
  };
  for (int k = 0; k <= 12; ++k)
    for (const auto& l : partitions3_of(k))
      if (l.l1 <= kTableauMaxRow) {
        EXPECT_EQ(schur_tableau(l, TQ{1, 1, 1}), count(l));
      }
}

TEST(Schur3, AgreesWithTableauExactly) {
  Rng rng(31);
  for (int l1 = 0; l1 <= 6; ++l1)
    for (int l2 = 0; l2 <= l1; ++l2)
      for (int l3 = 0; l3 <= l2; ++l3) {
        const Partition3 l(l1, l2, l3);
        for (int t = 0; t < 50; ++t) {
          const auto x = random_point(rng, t % 5 == 0);
          EXPECT_EQ(schur3(l, x), schur_tableau(l, x));
        }
      }
}

TEST(Schur3, BialternantAndJacobiTrudiAgreeAtDistinctPoints) {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_point(rng, false);
    if (x[0] == x[1] || x[0] == x[2] || x[1] == x[2]) continue;
    const Partition3 l(t % 9, (t % 9) / 2, (t % 9) / 4);
    EXPECT_EQ(schur_bialternant(l, x), schur_jacobi_trudi(l, x));
  }
  EXPECT_THROW(schur_bialternant(Partition3(1, 0, 0), TQ{1, 1, 2}), std::domain_error);
}

TEST(Schur3, SymmetricUnderPermutations) {
  Rng rng(33);
  for (int t = 0; t < 40; ++t) {
    auto x = random_point(rng, t % 4 == 0);
    const Partition3 l(t % 7, (t % 7) / 2, (t % 3 == 0) ? 0 : (t % 7) / 3);
    const Q ref = schur3(l, x);
    std::sort(x.begin(), x.end());
    do {
      EXPECT_EQ(schur3(l, x), ref);
    } while (std::next_permutation(x.begin(), x.end()));
  }
}

TEST(Schur3, ColumnFactorization) {
  Rng rng(34);
  for (int t = 0; t < 60; ++t) {
    const auto x = random_point(rng, t % 3 == 0);
    const Partition3 l(t % 6, (t % 6) / 2, (t % 6) / 5);
    const Partition3 up(l.l1 + 1, l.l2 + 1, l.l3 + 1);
    EXPECT_EQ(schur3(up, x), x[0] * x[1] * x[2] * schur3(l, x));
  }
}

TEST(Schur3, FloatCoincidentPointsAvoidZeroOverZero) {
  const Triple<Complex> x{Complex(0.3, 0.1), Complex(0.3, 0.1), Complex(-0.2, 0.4)};
  const Triple<Complex> jittered{Complex(0.3, 0.1), Complex(0.3 + 1e-9, 0.1), Complex(-0.2, 0.4)};
  const Partition3 l(4, 2, 1);
  const Complex v = schur3(l, x);
  EXPECT_TRUE(std::isfinite(v.real()));
  EXPECT_LT(std::abs(v - schur3(l, jittered)), 1e-7);
  EXPECT_LT(std::abs(v - schur_tableau(l, x)), 1e-13);
}

TEST(SchurGL2, Examples) {
  EXPECT_EQ(schur_gl2<Q>(0, Q(5), Q(7)), Q(1));
  EXPECT_EQ(schur_gl2<Q>(4, Q(3), Q(0)), Q(81));
  EXPECT_EQ(schur_gl2<Q>(2, Q(1), Q(2)), Q(7));
  EXPECT_EQ(schur_gl2<Q>(3, Q(2), Q(2)), Q(32));
}

TEST(SchurGL2, MatchesThreeVariableSpecialization) {
  Rng rng(35);
  for (int t = 0; t < 50; ++t) {
    const Q a = random_rational(rng, 6), b = t % 5 ? random_rational(rng, 6) : a;
    const int f = t % 9;
    EXPECT_EQ(schur_gl2(f, a, b), schur3(Partition3(f, 0, 0), TQ{a, b, Q(0)}));
  }
}

TEST(Cauchy, Examples) {
  const TQ a{Q(1, 2), Q(-2, 3), Q(3)};
  auto r0 = cauchy_check(a, TQ{0, 0, 0}, 10);
  EXPECT_TRUE(r0.exact_zero);
  const Q eps(1, 7);
  auto r1 = cauchy_check(TQ{eps, eps, eps}, TQ{Q(1, 3), Q(-2, 5), Q(1, 4)}, 10);
  EXPECT_TRUE(r1.exact_zero);
  auto r2 = cauchy_check(a, TQ{Q(1, 3), Q(2), Q(0)}, 10);
  EXPECT_TRUE(r2.exact_zero);
}

TEST(Cauchy, GammaThreeZeroKillsThirdRow) {
  const TQ g{Q(2, 3), Q(-1, 5), Q(0)};
  for (int k = 0; k <= 8; ++k)
    for (const auto& l : partitions3_of(k))
      if (l.l3 > 0) {
        EXPECT_EQ(schur3(l, g), Q(0));
      }
}

TEST(Cauchy, RandomExactAndFloat) {
  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const TQ a = random_point(rng, t % 3 == 0), g = random_point(rng, t % 4 == 0);
    EXPECT_TRUE(cauchy_check(a, g, 12).exact_zero);
    EXPECT_TRUE(cauchy_two_row(a, g[0], g[1], 12).exact_zero);
    Triple<Complex> ac, gc;
    for (int i = 0; i < 3; ++i) {
      ac[i] = 0.9 * random_unit(rng);
      gc[i] = 0.9 * random_unit(rng);
    }
    EXPECT_LT(cauchy_check(ac, gc, 12).max_abs, 1e-9);
    EXPECT_LT(cauchy_two_row(ac, gc[0], gc[1], 12).max_abs, 1e-9);
  }
}

TEST(CauchyTwoRow, Examples) {
  EXPECT_TRUE(cauchy_two_row(TQ{1, 0, 0}, Q(2, 3), Q(-3, 4), 10).exact_zero);
  EXPECT_TRUE(cauchy_two_row(TQ{1, 2, 3}, Q(1), Q(2), 6).exact_zero);
  const TQ a{Q(1, 2), Q(3), Q(-1)};
  for (int k = 0; k <= 8; ++k) {
    EXPECT_EQ(two_row_pair_sum(a, Q(5, 2), Q(0), k), schur3(Partition3(k, 0, 0), a) * power(Q(5, 2), k));
    EXPECT_EQ(schur3(Partition3(k, 0, 0), TQ{Q(5, 2), 0, 0}), power(Q(5, 2), k));
  }
}

TEST(CauchyTwoRow, DetectsWrongCoefficient) {
  const TQ a{1, 2, 3};
  auto res = cauchy_two_row(a, Q(1), Q(2), 6);
  EXPECT_TRUE(res.exact_zero);
  // Replacing gamma_2 by 0 in the Schur side only must break the identity.
  EulerFactorPoly<Q> p;
  for (const auto& x : a)
    for (const auto& y : {Q(1), Q(2)}) p = poly_mul(p, EulerFactorPoly<Q>::linear(x * y));
  const auto lhs = expand_inverse(p, 3);
  EXPECT_NE(lhs[2], two_row_pair_sum(a, Q(1), Q(0), 2));
}

TEST(TwoRowShapes, LinearlyIndependent) {
  // First M shapes (k1, k2) by degree, evaluated at M random points, give a nonsingular matrix.
  std::vector<std::pair<int, int>> shapes;
  for (int d = 0; shapes.size() < 20; ++d)
    for (int k1 = 0; 2 * k1 <= d; ++k1) shapes.emplace_back(k1, d - 2 * k1);
  shapes.resize(20);
  Rng rng(37);
  const std::size_t M = shapes.size();
  std::vector<std::vector<Q>> A(M, std::vector<Q>(M));
  for (std::size_t i = 0; i < M; ++i) {
    const TQ x{random_rational(rng, 20), random_rational(rng, 20), Q(0)};
    for (std::size_t j = 0; j < M; ++j) {
      const auto [k1, k2] = shapes[j];
      A[i][j] = schur3(Partition3(k1 + k2, k1, 0), x);
    }
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < M && rank < M; ++c) {
    std::size_t piv = rank;
    while (piv < M && A[piv][c].sign() == 0) ++piv;
    if (piv == M) continue;
    std::swap(A[piv], A[rank]);
    for (std::size_t r = rank + 1; r < M; ++r) {
      if (A[r][c].sign() == 0) continue;
      const Q f = A[r][c] / A[rank][c];
      for (std::size_t k = c; k < M; ++k) A[r][k] -= f * A[rank][k];
    }
    ++rank;
  }
  EXPECT_EQ(rank, M);
}
