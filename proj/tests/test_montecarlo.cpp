#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "margbayes/exact_risk.hpp"
#include "margbayes/montecarlo.hpp"

using namespace margbayes;

namespace {

SimulationPlan plan(std::int64_t m, std::int64_t n, std::int64_t N, std::int64_t Np,
                    std::int64_t reps, std::uint64_t seed, unsigned workers = 1) {
  return SimulationPlan{ProblemConfig{m, n, N, Np}, CellProbabilities::uniform(m, n), reps, seed,
                        workers};
}

}  // namespace

TEST(Simulate, AgreesWithExactDelta) {
  const auto pl = plan(1, 1, 4, 2, 100000, 7, 4);
  const auto r = simulate(pl);
  const double exact = delta_expectation(RowMargins::uniform(1), 4, 2, pl.cfg).value;
  EXPECT_LE(std::abs(r.delta_mean - exact), 3 * r.delta_se);
  const double direct = exact_risk_direct(pl.p, pl.cfg).value;
  const double combined = exact_risk_combined(pl.p, pl.cfg).value;
  EXPECT_LE(std::abs(r.risk_direct_mean - direct), 3 * r.risk_direct_se);
  EXPECT_LE(std::abs(r.risk_combined_mean - combined), 3 * r.risk_combined_se);
}

TEST(Simulate, NoAggregatedDataGivesNoDifference) {
  const auto r = simulate(plan(1, 2, 3, 0, 1000, 3));
  EXPECT_LE(std::abs(r.delta_mean), 1e-15);
  EXPECT_LE(r.delta_se, 1e-15);
}

TEST(Simulate, BitIdenticalAcrossWorkers) {
  const auto a = simulate(plan(1, 1, 4, 2, 20000, 99, 1));
  const auto b = simulate(plan(1, 1, 4, 2, 20000, 99, 4));
  const auto c = simulate(plan(1, 1, 4, 2, 20000, 99, 3));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Simulate, PairingReducesVariance) {
  const auto r = simulate(plan(2, 3, 3, 5, 20000, 5, 2));
  EXPECT_LE(r.delta_se, r.risk_direct_se + r.risk_combined_se);
  EXPECT_EQ(r.delta_mean, r.risk_combined_mean - r.risk_direct_mean);
}

TEST(Simulate, InvalidPlans) {
  EXPECT_THROW(simulate(plan(1, 1, 4, 2, 10, 1)), Error);
  auto bad = plan(1, 1, 4, 2, 1000, 1);
  bad.cfg.n = 2;
  try {
    simulate(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPlan);
  }
}

TEST(Sweep, IdenticalPlansGiveIdenticalResults) {
  const auto results = sweep({plan(1, 1, 2, 1, 5000, 11), plan(1, 1, 2, 1, 5000, 11),
                              plan(1, 1, 2, 3, 5000, 12)});
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(results[0], results[1]);
  EXPECT_EQ(results[0], simulate(plan(1, 1, 2, 1, 5000, 11)));
  EXPECT_THROW(sweep({}), Error);
}

TEST(Sweep, CrossesZeroNearThreshold) {
  // At p*, m = 1, n = 3, N = 1 the certified threshold is N' = 17; the
  // simulated difference at N' = 1 is positive and by N' = 40 clearly negative.
  const auto r = sweep({plan(1, 3, 1, 1, 100000, 21, 4), plan(1, 3, 1, 40, 100000, 22, 4)});
  EXPECT_GT(r[0].delta_mean, 0.0);
  EXPECT_LT(r[1].delta_mean, 0.0);
}

TEST(SimulationCsv, RowLayout) {
  const auto pl = plan(1, 1, 2, 1, 200, 4);
  std::ostringstream os;
  write_csv_header(os);
  write_csv_row(os, pl, simulate(pl));
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
  EXPECT_NE(s.find("\n1,1,2,1,200,4,"), std::string::npos);
}
