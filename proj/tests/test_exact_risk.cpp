#include <gtest/gtest.h>

#include <cmath>

#include "margbayes/exact_risk.hpp"
#include "oracles.hpp"

using namespace margbayes;

// Reference values below were computed with 40-digit arithmetic from the
// defining sums (full enumeration for the risks, binomial sums for H).

TEST(HTerm, HandValues) {
  EXPECT_NEAR(h_term(0, 2.0), std::log(1.5), 1e-15);
  EXPECT_NEAR(h_term(1, 2.0), std::log(4.0 / 3.0), 1e-15);
  double prev = h_term(0, 2.0);
  for (int x = 1; x < 1000; x *= 2) {
    const double v = h_term(x, 2.0);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
  EXPECT_THROW(h_term(0, -1.0), Error);
}

TEST(HEval, EnumerationValue) {
  // Bin(1, 1/2): 0.25 * 0.5 * (log 1.5 + log 4/3) = log(2)/8.
  EXPECT_NEAR(h_eval(0.5, 1, 2.0), std::log(2.0) / 8.0, 1e-16);
  EXPECT_NEAR(h_eval(0.5, 1, 2.0), 0.086643397569993164, 1e-16);
  EXPECT_NEAR(h_eval(0.3, 7, 2.5), 0.018802046674645402, 1e-16);
}

TEST(HEval, VanishesAtZero) {
  EXPECT_LT(h_eval(1e-6, 5, 2.0), 1e-12);
  EXPECT_THROW(h_eval(0.0, 5, 2.0), Error);
  EXPECT_THROW(h_eval(1.0, 5, 2.0), Error);
  EXPECT_NO_THROW(HFunction(5, 2.0).including_one(1.0));
}

TEST(DeltaSingle, SpotValue) {
  const ProblemConfig cfg{1, 3, 1, 1};
  const auto r = delta_single(RowMargins::uniform(1), 1, cfg);
  EXPECT_NEAR(r.value, std::log(1.2) - 0.25 * std::log(2.0), 1e-15);
  EXPECT_NEAR(r.value, 0.0090347616539682989, 1e-15);
  EXPECT_EQ(r.method, RiskMethod::ClosedForm);
  EXPECT_EQ(r.error_bound, 0.0);
}

TEST(DeltaSingle, NonUniformFrozen) {
  const ProblemConfig cfg{2, 3, 4, 1};
  const auto r = delta_single(RowMargins({0.2, 0.3, 0.5}), 4, cfg);
  EXPECT_NEAR(r.value, -0.0027382544109961854, 1e-15);
}

TEST(DeltaSingle, UniformMatchesDeltaStar) {
  for (std::int64_t m : {0, 1, 3}) {
    for (std::int64_t N : {1, 4, 30}) {
      const ProblemConfig cfg{m, 5, N, 1};
      EXPECT_NEAR(delta_single(RowMargins::uniform(m), N, cfg).value, delta_star(N, m, 3.0),
                  1e-15);
    }
  }
}

TEST(DeltaSingle, ShapeMismatch) {
  EXPECT_THROW(delta_single(RowMargins::uniform(2), 1, ProblemConfig{1, 3, 1, 1}), Error);
}

TEST(DeltaExpectation, ZeroAggregatedIsZero) {
  const ProblemConfig cfg{2, 3, 5, 0};
  EXPECT_EQ(delta_expectation(RowMargins({0.2, 0.3, 0.5}), 5, 0, cfg).value, 0.0);
}

TEST(DeltaExpectation, AgreesWithClosedFormAtOne) {
  const ProblemConfig cfg{1, 3, 1, 1};
  const auto direct = delta_expectation(RowMargins::uniform(1), 1, 1, cfg);
  EXPECT_NEAR(direct.value, 0.0090347616539682989, 1e-15);
  EXPECT_EQ(direct.method, RiskMethod::ExactMarginal);
}

TEST(DeltaExpectation, Telescoping) {
  const ProblemConfig cfg{2, 3, 4, 2};
  const RowMargins pdot({0.2, 0.3, 0.5});
  for (std::int64_t N : {1, 4, 9}) {
    const double two = delta_expectation(pdot, N, 2, cfg).value;
    const double sum = delta_single(pdot, N, cfg).value + delta_single(pdot, N + 1, cfg).value;
    EXPECT_NEAR(two, sum, 1e-12);
  }
}

TEST(DeltaDecomposition, FrozenAndEquivalent) {
  const ProblemConfig cfg{2, 3, 4, 3};
  const RowMargins pdot({0.2, 0.3, 0.5});
  const auto r = delta_decomposition(pdot, cfg);
  EXPECT_EQ(r.method, RiskMethod::Decomposition);
  EXPECT_NEAR(r.value, -0.0079215883477478091, 1e-15);
  EXPECT_NEAR(r.value, delta_expectation(pdot, 4, 3, cfg).value, 1e-12);
  const ProblemConfig one{2, 3, 4, 1};
  EXPECT_DOUBLE_EQ(delta_decomposition(pdot, one).value, delta_single(pdot, 4, one).value);
}

TEST(DeltaDecomposition, OracleEquivalenceOnSmallGrid) {
  std::mt19937_64 rng(5);
  for (std::int64_t m = 0; m <= 2; ++m) {
    for (std::int64_t n = 0; n <= 2; ++n) {
      for (int trial = 0; trial < 20; ++trial) {
        const RowMargins pdot(m == 0 ? std::vector<double>{1.0}
                                     : oracle::random_margins(static_cast<std::size_t>(m + 1), rng));
        for (std::int64_t N = 1; N <= 4; ++N) {
          for (std::int64_t Np = 0; Np <= 4; ++Np) {
            const ProblemConfig cfg{m, n, N, Np};
            EXPECT_NEAR(delta_decomposition(pdot, cfg).value,
                        delta_expectation(pdot, N, Np, cfg).value, 1e-12);
          }
        }
      }
    }
  }
}

TEST(DeltaStar, PartialSumsAccumulate) {
  const auto sums = delta_star_partial_sums(1, 1, 2.0, 5);
  ASSERT_EQ(sums.size(), 5u);
  double running = 0.0;
  for (std::int64_t v = 1; v <= 5; ++v) {
    running += delta_star(v, 1, 2.0);
    EXPECT_DOUBLE_EQ(sums[static_cast<std::size_t>(v - 1)], running);
  }
}

TEST(ExactRisk, FrozenEnumerationValues) {
  const auto p = validate_probabilities(Grid<double>::from_rows({{0.1, 0.2}, {0.3, 0.4}}));
  const ProblemConfig cfg{1, 1, 3, 2};
  const auto direct = exact_risk_direct(p, cfg);
  const auto combined = exact_risk_combined(p, cfg);
  EXPECT_NEAR(direct.value, 0.19568026879710532, 1e-14);
  EXPECT_NEAR(combined.value, 0.18281199057987001, 1e-14);
  EXPECT_EQ(direct.target, RiskTarget::RiskDirect);
  EXPECT_EQ(combined.target, RiskTarget::RiskCombined);
}

TEST(ExactRisk, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(17);
  for (auto [m, n] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 2}, {0, 1}}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto rows = oracle::random_grid(static_cast<std::size_t>(m + 1),
                                            static_cast<std::size_t>(n + 1), rng);
      const auto p = validate_probabilities(Grid<double>::from_rows(rows));
      for (std::int64_t N = 1; N <= 3; ++N) {
        for (std::int64_t Np = 0; Np <= 2; ++Np) {
          const ProblemConfig cfg{m, n, N, Np};
          const auto brute = oracle::brute_force_risks(rows, N, Np);
          EXPECT_NEAR(exact_risk_direct(p, cfg).value, brute.direct, 1e-12);
          EXPECT_NEAR(exact_risk_combined(p, cfg).value, brute.combined, 1e-12);
        }
      }
    }
  }
}

TEST(ExactRisk, DifferenceIsRiskDifference) {
  std::mt19937_64 rng(23);
  for (std::int64_t m = 0; m <= 2; ++m) {
    for (std::int64_t n = 0; n <= 2; ++n) {
      if (m == 0 && n == 0) continue;
      const auto rows = oracle::random_grid(static_cast<std::size_t>(m + 1),
                                            static_cast<std::size_t>(n + 1), rng);
      const auto p = validate_probabilities(Grid<double>::from_rows(rows));
      const auto pdot = row_margins(p);
      for (std::int64_t N = 1; N <= 4; ++N) {
        for (std::int64_t Np = 0; Np <= 4; ++Np) {
          const ProblemConfig cfg{m, n, N, Np};
          const double diff = exact_risk_combined(p, cfg).value - exact_risk_direct(p, cfg).value;
          EXPECT_NEAR(diff, delta_expectation(pdot, N, Np, cfg).value, 1e-11);
        }
      }
    }
  }
}

TEST(ExactRisk, SpotDifferenceAtUniform) {
  const auto p = CellProbabilities::uniform(1, 3);
  const ProblemConfig cfg{1, 3, 1, 1};
  const double diff = exact_risk_combined(p, cfg).value - exact_risk_direct(p, cfg).value;
  EXPECT_NEAR(diff, 0.0090347616539682989, 1e-13);
}

TEST(ExactRisk, SampleSizeScanAtUniform) {
  // At the uniform 2x2 grid the smoothed estimate starts out close to the
  // truth, so the risk first rises (peak at N = 3) and only then falls.
  const auto p = CellProbabilities::uniform(1, 1);
  std::vector<double> risk;
  for (std::int64_t N = 1; N <= 50; ++N) {
    risk.push_back(exact_risk_direct(p, ProblemConfig{1, 1, N, 0}).value);
  }
  EXPECT_LT(risk[0], risk[1]);
  EXPECT_LT(risk[1], risk[2]);
  for (std::size_t k = 3; k < risk.size(); ++k) EXPECT_LT(risk[k], risk[k - 1]) << "N=" << k + 1;
}

TEST(Convexity, HoldsForNAtLeastThree) {
  for (std::int64_t n : {3, 9}) {
    const auto r = convexity_scan(n == 3 ? 5 : 20, 0.5 * static_cast<double>(n + 1));
    EXPECT_GE(r.min_second_difference, kConvexityThreshold);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(r.points, 99);
  }
}

TEST(Convexity, ReportsOutsideHypothesis) {
  const auto r = convexity_scan(5, 1.0);
  EXPECT_EQ(r.points, 99);
  EXPECT_TRUE(std::isfinite(r.min_second_difference));
  EXPECT_THROW(convexity_scan(5, 2.0, 0.2), Error);
}

TEST(Convexity, ScanAgreesWithProofIdentity) {
  // H''(p) = E[g(X) - 2 g(X-1) + g(X-2)], g(x) = (x+2)(x+1)h(x), X ~ Bin(N, p).
  const std::int64_t N = 6;
  const double nt = 2.5;
  for (double p : {0.2, 0.5, 0.8}) {
    double exact = 0.0;
    for (std::int64_t x = 0; x <= N; ++x) {
      exact += oracle::binomial_pmf_factorial(N, x, p) * htilde_second_difference(x, nt);
    }
    const HFunction H(N, nt);
    const double d = 1e-3;
    const double fd = (H(p + d) - 2 * H(p) + H(p - d)) / (d * d);
    EXPECT_NEAR(fd, exact, 1e-5);
  }
}

TEST(HTildeSecondDifference, HandValues) {
  EXPECT_NEAR(htilde_second_difference(0, 2.0), 2.0 * std::log(1.5), 1e-15);
  const double x1 = 6.0 * (std::log(4.0 / 3.0) - (2.0 / 3.0) * std::log(1.5));
  EXPECT_NEAR(htilde_second_difference(1, 2.0), x1, 1e-14);
  EXPECT_GT(x1, 0.0);
}

TEST(HTildeSecondDifference, NonnegativeForNtildeAtLeastTwo) {
  for (double nt : {2.0, 2.5, 3.0, 5.0}) {
    for (std::int64_t x = 0; x <= 200; ++x) {
      EXPECT_GE(htilde_second_difference(x, nt), 0.0) << "x=" << x << " nt=" << nt;
    }
  }
}

TEST(RiskMethodNames, RoundTrip) {
  for (auto m : {RiskMethod::ExactMarginal, RiskMethod::ClosedForm, RiskMethod::Decomposition,
                 RiskMethod::Quadrature, RiskMethod::MonteCarlo}) {
    EXPECT_EQ(parse_risk_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_risk_method("bogus"), Error);
}
