#include <gtest/gtest.h>

#include <random>

#include "dartree/linalg.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/radical.hpp"
#include "dartree/rational.hpp"
#include "oracles/oracle.hpp"

using namespace dartree;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("6/4"), make_rational(3, 2));
  EXPECT_EQ(parse_rational("-2"), make_rational(-2));
  EXPECT_EQ(to_string(make_rational(4, 4)), "1");
  EXPECT_EQ(to_string(make_rational(2, -6)), "-1/3");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Rational, IntegerPairIsCanonical) {
  EXPECT_EQ(make_rational(Integer(24), Integer(24)), Rational(1));
}

TEST(Rational, FactorialAndRising) {
  EXPECT_EQ(factorial(5), Integer(120));
  EXPECT_EQ(rising(Rational(3), 4), Rational(3 * 4 * 5 * 6));
  EXPECT_EQ(rising(Rational(7), 0), Rational(1));
}

TEST(MultiIndex, CountsMatchBinomial) {
  for (std::size_t d = 1; d <= 4; ++d)
    for (int n = 0; n <= 6; ++n) {
      // C(n+d-1, d-1)
      Integer want;
      mpz_bin_uiui(want.get_mpz_t(), n + d - 1, d - 1);
      EXPECT_EQ(Integer(static_cast<long>(multiindices(d, n).size())), want);
    }
}

TEST(MultiIndex, MultinomialIdentity) {
  // sum_{|alpha|=n} n!/alpha! = d^n
  for (std::size_t d = 1; d <= 3; ++d)
    for (int n = 0; n <= 6; ++n) {
      Integer s = 0;
      for (const auto& a : multiindices(d, n)) s += factorial(n) / multi_factorial(a);
      Integer want;
      mpz_ui_pow_ui(want.get_mpz_t(), d, n);
      EXPECT_EQ(s, want);
    }
}

TEST(MultiIndex, SubsetHelpers) {
  EXPECT_EQ(members(0b101u, 3), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(support(MultiIndex{0, 2, 1}), 0b110u);
  EXPECT_TRUE(contains(0b10u, 1));
}

TEST(Radical, SqrtSplitsSquares) {
  const auto r = Radical::sqrt(make_rational(8, 9));
  EXPECT_FALSE(r.is_rational());
  EXPECT_EQ(r * r, Radical(make_rational(8, 9)));
  EXPECT_TRUE(Radical::sqrt(make_rational(9, 4)).is_rational());
  EXPECT_EQ(Radical::sqrt(make_rational(9, 4)).rational_value(), make_rational(3, 2));
}

TEST(Radical, SumOfDistinctRadicandsIsNotRational) {
  const auto s = Radical::sqrt(Rational(2)) + Radical::sqrt(Rational(3));
  EXPECT_FALSE(s.is_rational());
  EXPECT_NEAR(s.to_double(), std::sqrt(2.0) + std::sqrt(3.0), 1e-12);
  EXPECT_TRUE((s - s).is_zero());
}

TEST(Linalg, AllOnesRowNullspace) {
  IntMatrix a{{1, 1, 1}};
  const auto ns = nullspace_integer(a, 3);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns) EXPECT_EQ(v[0] + v[1] + v[2], 0);
  EXPECT_TRUE(same_span(to_rational(ns), RatMatrix{{1, -1, 0}, {1, 0, -1}}));
}

TEST(Linalg, RankMatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 1 + trial % 6, c = 1 + (trial * 7) % 6;
    RatMatrix m(r, RatVector(c));
    std::vector<std::vector<oracle::Q>> o(r, std::vector<oracle::Q>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) o[i][j] = m[i][j] = entry(rng) * (trial % 3 == 0 ? 0 : 1) + (i == j);
    EXPECT_EQ(rank(m), oracle::rank(o));
    IntMatrix im(r, std::vector<Integer>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) im[i][j] = m[i][j].get_num();
    EXPECT_EQ(nullspace_integer(im, c).size(), c - oracle::rank(o));
  }
}

TEST(Linalg, SpanContainment) {
  RatMatrix big{{1, 0, 0}, {0, 1, 0}};
  EXPECT_TRUE(span_contains(big, RatMatrix{{2, 3, 0}}));
  EXPECT_FALSE(span_contains(big, RatMatrix{{0, 0, 1}}));
}

TEST(Linalg, GramSchmidtDropsDependentVectors) {
  const auto q = gram_schmidt({{1, 1, 0}, {2, 2, 0}, {0, 1, 1}});
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(dot(q[0], q[1]), 0.0, 1e-12);
  EXPECT_NEAR(norm(q[1]), 1.0, 1e-12);
}
