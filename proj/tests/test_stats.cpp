#include <gtest/gtest.h>

#include "cellsort/stats.hpp"
#include "oracle/stats_oracle.inc"

using namespace cellsort;

namespace {
void expect_close(double actual, double expected, double tol) {
  EXPECT_LE(std::fabs(actual - expected), tol * std::max(1.0, std::fabs(expected))) << actual << " vs " << expected;
}
}  // namespace

TEST(Stats, MatchesFrozenOracle) {
  for (const auto& c : kStatsOracle) {
    const auto z = z_test(c.a, c.b);
    const auto t = welch_t_test(c.a, c.b);
    expect_close(z.statistic, c.z, 1e-9);
    expect_close(z.p_value, c.z_p, 1e-9);
    expect_close(t.statistic, c.t, 1e-9);
    expect_close(t.dof, c.t_dof, 1e-9);
    expect_close(t.p_value, c.t_p, 1e-9);
  }
}

TEST(Stats, KnownSmallCase) {
  const std::vector<double> a = {0, 0, 1, 1}, b = {1, 1, 2, 2};
  const auto z = z_test(a, b);
  EXPECT_NEAR(z.statistic, -2.82842712474619, 1e-12);
  EXPECT_NEAR(z.p_value, 0.004677734981047266, 1e-12);
  const auto t = welch_t_test(a, b);
  EXPECT_NEAR(t.statistic, -2.449489742783178, 1e-12);
  EXPECT_NEAR(t.dof, 6.0, 1e-12);
  EXPECT_NEAR(t.p_value, 0.04982526278057675, 1e-9);
}

TEST(Stats, NormalCdfSymmetry) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-12);
  for (double x = -8; x <= 8; x += 0.125) EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-12);
}

TEST(Stats, SummaryUsesPopulationStdByDefault) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_NEAR(summarize(v).std, std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(summarize(v, StdKind::Sample).std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_THROW(summarize(std::vector<double>{}), StatsError);
}

TEST(Stats, IdenticalGroupsGiveZeroAndOne) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const auto z = z_test(a, a);
  EXPECT_EQ(z.statistic, 0.0);
  EXPECT_EQ(z.p_value, 1.0);
}

TEST(Stats, ZeroSpreadEqualMeans) {
  const std::vector<double> a = {2, 2, 2};
  const auto z = z_test(a, a);
  EXPECT_EQ(z.statistic, 0.0);
  EXPECT_EQ(z.p_value, 1.0);
  EXPECT_FALSE(z.saturated);
}

TEST(Stats, ZeroSpreadDifferentMeansSaturates) {
  const std::vector<double> a = {2, 2, 2}, b = {3, 3, 3};
  const auto z = z_test(a, b);
  EXPECT_TRUE(z.saturated);
  EXPECT_TRUE(std::isinf(z.statistic));
  EXPECT_LT(z.statistic, 0);
  EXPECT_EQ(z.p_value, 0.0);
  const auto t = welch_t_test(b, a);
  EXPECT_TRUE(t.saturated);
  EXPECT_GT(t.statistic, 0);
}

TEST(Stats, WelchNeedsTwoPerGroup) {
  const std::vector<double> a = {1}, b = {1, 2};
  EXPECT_THROW(welch_t_test(a, b), StatsError);
}

TEST(Stats, UnderflowPrintsBound) {
  EXPECT_EQ(format_p(0.0), "<1e-300");
  EXPECT_EQ(format_p(0.5), "0.5");
}
