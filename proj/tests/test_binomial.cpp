#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "margbayes/binomial.hpp"
#include "margbayes/core_model.hpp"
#include "oracles.hpp"

using namespace margbayes;

TEST(BinomialPmf, MatchesFactorialFormula) {
  for (std::int64_t n : {1, 2, 5, 12, 20}) {
    for (double p : {0.01, 0.2, 0.5, 0.73, 0.99}) {
      const auto pmf = binomial_pmf(n, p);
      ASSERT_EQ(pmf.size(), static_cast<std::size_t>(n + 1));
      for (std::int64_t x = 0; x <= n; ++x) {
        const double expected = oracle::binomial_pmf_factorial(n, x, p);
        EXPECT_NEAR(pmf[static_cast<std::size_t>(x)], expected, 1e-13 * expected + 1e-300)
            << "n=" << n << " p=" << p << " x=" << x;
      }
    }
  }
}

TEST(BinomialPmf, NormalisedAtLargeN) {
  const auto pmf = binomial_pmf(10000, 0.5);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-14);
  // Mean and variance of Bin(n, p).
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    mean += pmf[x] * static_cast<double>(x);
    second += pmf[x] * static_cast<double>(x) * static_cast<double>(x);
  }
  EXPECT_NEAR(mean, 5000.0, 1e-8);
  EXPECT_NEAR(second - mean * mean, 2500.0, 1e-5);
}

TEST(BinomialPmf, DegenerateEndpoints) {
  EXPECT_EQ(binomial_pmf(4, 0.0), (std::vector<double>{1, 0, 0, 0, 0}));
  EXPECT_EQ(binomial_pmf(4, 1.0), (std::vector<double>{0, 0, 0, 0, 1}));
  EXPECT_EQ(binomial_pmf(0, 0.3), (std::vector<double>{1}));
  EXPECT_THROW(binomial_pmf(3, 1.5), Error);
  EXPECT_THROW(binomial_pmf(-1, 0.5), Error);
}

TEST(BinomialExpectation, LinearMoments) {
  EXPECT_NEAR(binomial_expectation(7, 0.3, [](std::int64_t x) { return double(x); }), 2.1, 1e-14);
  EXPECT_NEAR(binomial_expectation(7, 0.3, [](std::int64_t) { return 1.0; }), 1.0, 1e-15);
}
