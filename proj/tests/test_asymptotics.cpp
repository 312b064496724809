#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "margbayes/asymptotics.hpp"
#include "margbayes/quadrature.hpp"

using namespace margbayes;

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate_adaptive([](double x) { return x * x * x - 2 * x + 1; }, 0.0, 2.0, {});
  EXPECT_NEAR(r.value, 4.0 - 4.0 + 2.0, 1e-14);
  EXPECT_LE(r.error, 1e-12);
}

TEST(Quadrature, SemiInfiniteExponential) {
  const auto r = integrate_semi_infinite([](double t) { return std::exp(-3.0 * t); }, 3.0, {});
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-12);
  EXPECT_LE(r.error, 1e-9);
  EXPECT_GT(r.truncation, 1.0);
}

TEST(Quadrature, BudgetExhaustionThrows) {
  QuadratureSpec tight;
  tight.abs_tol = 1e-300;
  tight.rel_tol = 0.0;
  tight.max_depth = 2;
  try {
    integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight);
    FAIL() << "expected QuadratureFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureFailure);
  }
}

TEST(DeltaStarQuadrature, SpotValue) {
  const auto r = delta_star_quadrature(1, 1, 2.0);
  EXPECT_NEAR(r.value, 0.0090347616539682989, 1e-8);
  EXPECT_EQ(r.method, RiskMethod::Quadrature);
  EXPECT_GT(r.error_bound, 0.0);
  EXPECT_LT(r.error_bound, 1e-8);
  EXPECT_EQ(r.config.n, 3);
}

TEST(DeltaStarQuadrature, MatchesClosedForm) {
  for (std::int64_t m : {1, 2, 4}) {
    for (double nt : {2.0, 3.0, 5.0}) {
      for (std::int64_t N : {1, 7, 50}) {
        const double closed = delta_star(N, m, nt);
        const auto quad = delta_star_quadrature(N, m, nt);
        EXPECT_NEAR(quad.value, closed, 1e-8) << "m=" << m << " nt=" << nt << " N=" << N;
      }
    }
  }
}

TEST(DeltaStarQuadrature, TendsToZeroFromBelow) {
  const double big = delta_star_quadrature(400, 1, 2.0).value;
  EXPECT_LT(big, 0.0);
  EXPECT_GT(big, -1e-4);
}

TEST(HSeries, MatchesExpectation) {
  EXPECT_NEAR(h_series(0.5, 1, 2.0, 1e-14), 0.086643397569993164, 1e-12);
  for (double nt : {2.0, 3.0, 5.0}) {
    for (std::int64_t N : {1, 5, 20}) {
      for (int k = 1; k <= 9; ++k) {
        const double p = 0.1 * k;
        EXPECT_NEAR(h_series(p, N, nt, 1e-14), h_eval(p, N, nt), 1e-12);
      }
    }
  }
}

TEST(HSeries, LooseToleranceStaysWithinBound) {
  const double tol = 1e-6;
  EXPECT_NEAR(h_series(0.4, 6, 2.0, tol), h_eval(0.4, 6, 2.0), 10 * tol);
  EXPECT_THROW(h_series(1.0, 6, 2.0, tol), Error);
}

TEST(SampleSizeLimit, TargetsAndGap) {
  const std::vector<std::int64_t> Ns{10, 100, 1000, 10000};
  const auto r1 = sample_size_limit(1, 2.0, Ns);
  EXPECT_DOUBLE_EQ(r1.target, -0.5);
  // 40-digit reference for (N+1)^2 delta_star at N = 1e4.
  EXPECT_NEAR(r1.points.back().scaled_value, -0.49940038729260406, 1e-6);
  EXPECT_LE(r1.achieved_gap, 0.05);
  const auto r2 = sample_size_limit(2, 2.0, Ns);
  EXPECT_DOUBLE_EQ(r2.target, -1.0);
  EXPECT_NEAR(r2.points.back().scaled_value, -0.99816832380349234, 1e-6);
  // Approaches the target from above: the gap shrinks along the table.
  for (std::size_t k = 1; k < r1.points.size(); ++k) {
    EXPECT_LT(std::abs(r1.points[k].scaled_value + 0.5),
              std::abs(r1.points[k - 1].scaled_value + 0.5));
  }
}

TEST(SampleSizeLimit, RejectsUnorderedValues) {
  const std::vector<std::int64_t> bad{10, 5};
  EXPECT_THROW(sample_size_limit(1, 2.0, bad), Error);
}

TEST(RowCountLimit, ApproachesPositiveConstant) {
  const std::vector<std::int64_t> ms{10, 100, 1000, 10000};
  const auto r = row_count_limit(5, 2.0, ms);
  EXPECT_NEAR(r.target, 0.5 - std::log(1.5), 1e-15);
  EXPECT_NEAR(r.points.back().scaled_value, 0.094456323845240627, 1e-9);
  EXPECT_LE(r.achieved_gap, 0.02 * r.target);
  for (const auto& pt : r.points) EXPECT_GT(pt.scaled_value, 0.0);
}

TEST(ColumnDerivative, SignsAtProbePoints) {
  const double d1 = column_derivative(1, 1, 2.0);
  EXPECT_LT(d1, 0.0);
  EXPECT_NEAR(d1, -0.0020833333333332699, 1e-9);
  const double n = 200;
  const double scaled = n * n * n * column_derivative(2, 1, 0.5 * (n + 1));
  EXPECT_LT(scaled, 0.0);
  EXPECT_NEAR(scaled, -0.91462295433865845, 1e-4);
}

TEST(ColumnDerivative, CentralDifferenceOrder) {
  // Halving the step changes the estimate by O(step^2).
  const double a = column_derivative(3, 1, 3.0, 1e-2);
  const double b = column_derivative(3, 1, 3.0, 5e-3);
  const double c = column_derivative(3, 1, 3.0, 2.5e-3);
  EXPECT_NEAR((a - b) / (b - c), 4.0, 0.05);
}

TEST(ColumnDerivative, StepTooLarge) {
  try {
    column_derivative(1, 1, 2.0, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
  EXPECT_THROW(column_derivative(1, 1, 2.0, 0.0), Error);
}

TEST(ScaledColumnDerivative, NegativeForLargeN) {
  const std::vector<std::int64_t> ns{50, 100, 200};
  const auto r = scaled_column_derivative(2, 1, ns);
  EXPECT_TRUE(std::isnan(r.target));
  for (const auto& pt : r.points) EXPECT_LT(pt.scaled_value, 0.0);
}

TEST(LimitReportCsv, HasHeaderAndRows) {
  const std::vector<std::int64_t> Ns{10, 20};
  const auto r = sample_size_limit(1, 2.0, Ns);
  std::ostringstream os;
  write_csv(os, r);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("parameter,scaled_value,target,gap\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
}
