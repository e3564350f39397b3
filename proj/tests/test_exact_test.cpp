#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace wylight;

TEST(HypergeomPmf, SingleTransactionPattern) {
  const auto pmf = hypergeom_pmf_table({1, 10, 50});
  ASSERT_EQ(pmf.size(), 2u);
  EXPECT_NEAR(pmf[0], 0.8, 1e-15);
  EXPECT_NEAR(pmf[1], 0.2, 1e-15);
}

TEST(HypergeomPmf, EmptySupport) {
  const auto pmf = hypergeom_pmf_table({0, 5, 20});
  ASSERT_EQ(pmf.size(), 1u);
  EXPECT_DOUBLE_EQ(pmf[0], 1.0);
}

TEST(HypergeomPmf, SmallTable) {
  const auto pmf = hypergeom_pmf_table({2, 2, 4});
  ASSERT_EQ(pmf.size(), 3u);
  EXPECT_NEAR(pmf[0], 1.0 / 6, 1e-15);
  EXPECT_NEAR(pmf[1], 4.0 / 6, 1e-15);
  EXPECT_NEAR(pmf[2], 1.0 / 6, 1e-15);
}

TEST(HypergeomPmf, SumsToOneAndMatchesIntegers) {
  for (std::size_t N = 1; N <= 30; ++N) {
    for (std::size_t n = 1; 2 * n <= N; ++n) {
      for (std::size_t x = 0; x <= N; ++x) {
        const Margins m{x, n, N};
        const auto pmf = hypergeom_pmf_table(m);
        double sum = 0;
        for (std::size_t k = m.a_min(); k <= m.a_max(); ++k) {
          const double exact =
              static_cast<double>(oracle::choose(n, k) * oracle::choose(N - n, x - k)) /
              static_cast<double>(oracle::choose(N, x));
          EXPECT_NEAR(pmf[k - m.a_min()], exact, 1e-13 * exact);
          sum += pmf[k - m.a_min()];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(Margins, RejectsInconsistentMargins) {
  EXPECT_THROW(Margins({5, 2, 4}).validate(), std::invalid_argument);
  EXPECT_THROW(Margins({1, 5, 4}).validate(), std::invalid_argument);
}

TEST(PValueTable, RightTailWins) {
  const auto t = pvalue_table({2, 2, 4}, PValueMode::one_tailed);
  EXPECT_NEAR(t.at(2), 1.0 / 6, 1e-15);
  EXPECT_NEAR(t.at(0), 1.0 / 6, 1e-15);
  EXPECT_NEAR(t.at(1), 5.0 / 6, 1e-15);  // both tails equal 5/6
}

TEST(PValueTable, EmptySupportIsOne) {
  const auto t = pvalue_table({0, 7, 30}, PValueMode::one_tailed);
  ASSERT_EQ(t.log_pvalues().size(), 1u);
  EXPECT_DOUBLE_EQ(t.at(0), 1.0);
}

TEST(PValueTable, SingleTransaction) {
  const auto t = pvalue_table({1, 10, 50}, PValueMode::one_tailed);
  EXPECT_NEAR(t.at(1), 0.2, 1e-15);
  EXPECT_NEAR(t.at(0), 0.8, 1e-15);
}

TEST(PValueTable, TwoTailedDoublesAndCaps) {
  const auto one = pvalue_table({5, 8, 20}, PValueMode::one_tailed);
  const auto two = pvalue_table({5, 8, 20}, PValueMode::two_tailed);
  for (std::size_t a = one.a_min(); a <= one.a_max(); ++a) {
    EXPECT_NEAR(two.at(a), std::min(1.0, 2 * one.at(a)), 1e-14);
  }
}

TEST(PValueTable, MatchesExactRationals) {
  for (std::size_t N = 2; N <= 40; N += 3) {
    for (std::size_t n = 1; 2 * n <= N; ++n) {
      for (std::size_t x = 0; x <= N; ++x) {
        const auto t = pvalue_table({x, n, N}, PValueMode::one_tailed);
        for (std::size_t a = t.a_min(); a <= t.a_max(); ++a) {
          const double exact = oracle::exact_pvalue(x, n, N, a).value();
          EXPECT_NEAR(t.at(a), exact, 1e-10 * exact) << N << ' ' << n << ' ' << x << ' ' << a;
        }
      }
    }
  }
}

TEST(PValueTable, TinyValuesStayInLogSpace) {
  // 1/C(2000, 1000) underflows a double; its log does not.
  const auto t = pvalue_table({1000, 1000, 2000}, PValueMode::one_tailed);
  EXPECT_TRUE(std::isfinite(t.log_at(1000)));
  EXPECT_LT(t.log_at(1000), -1000.0);
  EXPECT_DOUBLE_EQ(t.at(1000), 0.0);
}

TEST(PValueTable, CallCounter) {
  const auto before = pvalue_table_calls();
  pvalue_table({3, 4, 10}, PValueMode::one_tailed);
  pvalue_table({3, 4, 10}, PValueMode::two_tailed);
  EXPECT_EQ(pvalue_table_calls() - before, 2u);
}

TEST(MinAttainable, Examples) {
  EXPECT_DOUBLE_EQ(min_attainable_pvalue(0, 10, 50), 1.0);
  EXPECT_NEAR(min_attainable_pvalue(1, 10, 50), 0.2, 1e-15);
  EXPECT_NEAR(min_attainable_pvalue(49, 10, 50), 0.2, 1e-15);
}

TEST(MinAttainable, EqualsTableMinimumEverywhere) {
  for (std::size_t N = 1; N <= 60; ++N) {
    const LogFactorialTable lf(N);
    for (std::size_t n = 1; 2 * n <= N; ++n) {
      for (std::size_t x = 0; x <= N; ++x) {
        const LogProb closed = log_min_attainable_pvalue(x, n, N, lf);
        const LogProb table = pvalue_table({x, n, N}, PValueMode::one_tailed, lf).log_min();
        EXPECT_TRUE(log_approx_eq(closed, table)) << N << ' ' << n << ' ' << x;
      }
    }
  }
}

TEST(PsiTable, Examples) {
  const auto psi = psi_table(2, 6);
  const double expected[] = {1, 1.0 / 3, 1.0 / 15, 1.0 / 5, 1.0 / 15, 1.0 / 3, 1};
  for (std::size_t x = 0; x <= 6; ++x) EXPECT_NEAR(psi.at(x), expected[x], 1e-15) << x;
  const auto small = psi_table(1, 2);
  EXPECT_DOUBLE_EQ(small.at(0), 1.0);
  EXPECT_NEAR(small.at(1), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(small.at(2), 1.0);
}

TEST(PsiTable, MatchesClosedFormAndSymmetry) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t N = std::uniform_int_distribution<std::size_t>(2, 500)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, N / 2)(rng);
    const LogFactorialTable lf(N);
    for (auto mode : {PValueMode::one_tailed, PValueMode::two_tailed}) {
      const auto psi = psi_table(n, N, mode);
      EXPECT_EQ(psi.log_at(0), kLogOne);
      for (std::size_t x = 0; x <= N; ++x) {
        EXPECT_TRUE(log_approx_eq(psi.log_at(x), log_min_attainable_pvalue(x, n, N, lf, mode)));
        EXPECT_EQ(psi.log_at(x), psi.log_at(N - x));
      }
    }
  }
}

TEST(Mode, ParseAndPrint) {
  EXPECT_EQ(parse_mode("one-tailed"), PValueMode::one_tailed);
  EXPECT_EQ(parse_mode("two-tailed"), PValueMode::two_tailed);
  EXPECT_EQ(to_string(PValueMode::two_tailed), "two-tailed");
  EXPECT_ANY_THROW(parse_mode("both"));
}
