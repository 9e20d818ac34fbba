#include <gtest/gtest.h>

#include "cellsort/metrics.hpp"
#include "cellsort/rng.hpp"

using namespace cellsort;

TEST(Sortedness, CountsFirstPositionAndOrderedPairs) {
  const std::vector<int> sorted = {1, 2, 3, 4};
  const std::vector<int> reversed = {4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(sortedness(sorted, Direction::Increasing), 1.0);
  EXPECT_DOUBLE_EQ(sortedness(reversed, Direction::Increasing), 0.25);
  EXPECT_DOUBLE_EQ(sortedness(reversed, Direction::Decreasing), 1.0);
  const std::vector<int> one = {7};
  EXPECT_DOUBLE_EQ(sortedness(one, Direction::Increasing), 1.0);
}

TEST(Sortedness, StrictTreatsTiesAsUnordered) {
  const std::vector<int> v = {1, 1, 2};
  EXPECT_DOUBLE_EQ(sortedness(v, Direction::Increasing), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(sortedness(v, Direction::Increasing, false), 1.0);
}

TEST(MonotonicityError, CountsViolatingPairs) {
  const std::vector<int> v = {2, 1, 3, 3, 0};
  EXPECT_EQ(monotonicity_error(v, Direction::Increasing), 2);
  EXPECT_EQ(monotonicity_error(v, Direction::Decreasing), 1);
}

TEST(AggregationValue, SharesOfEqualAdjacentLabels) {
  const std::vector<int> alternating = {0, 1, 0, 1};
  const std::vector<int> blocks = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(aggregation_value(alternating), 0.0);
  EXPECT_DOUBLE_EQ(aggregation_value(blocks), 2.0 / 3.0);
  EXPECT_THROW(aggregation_value(std::vector<int>{0}), ConfigError);
}

TEST(AggregationValue, RandomTwoLabelAssignmentAveragesOneHalf) {
  Rng rng(11);
  double total = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> labels(100);
    for (int i = 0; i < 100; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
    rng.shuffle(std::span<int>(labels));
    total += aggregation_value(labels);
  }
  // With 50 of each label shuffled, a neighbour matches with probability 49/99.
  EXPECT_NEAR(total / trials, 0.5, 0.01);
}

TEST(DgSegmentation, MonotoneTrajectoryHasNoEvents) {
  const std::vector<double> t = {0.1, 0.2, 0.2, 0.5, 1.0};
  EXPECT_TRUE(segment_dg_events(t).empty());
  EXPECT_DOUBLE_EQ(delayed_gratification(segment_dg_events(t)), 0.0);
}

TEST(DgSegmentation, PeakValleyPeakEpisodes) {
  const std::vector<double> t = {0.3, 0.5, 0.4, 0.4, 0.7, 0.6, 0.9, 0.8};
  const auto e = segment_dg_events(t);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_NEAR(e[0].drop, 0.1, 1e-15);
  EXPECT_NEAR(e[0].rise, 0.3, 1e-15);
  EXPECT_NEAR(e[1].drop, 0.1, 1e-15);
  EXPECT_NEAR(e[1].rise, 0.3, 1e-15);
  EXPECT_NEAR(e[2].drop, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(e[2].rise, 0.0);
}

TEST(DgScore, BothFormulasOnOneEvent) {
  const DGEvent e{0.1, 0.2};
  EXPECT_NEAR(dg_score(e, DgFormula::Methods), 1.0, 1e-12);
  EXPECT_NEAR(dg_score(e, DgFormula::Fig6D), 2.0, 1e-12);
  EXPECT_EQ(dg_score(e, DgFormula::Methods), dg_score(e, DgFormula::Fig6D) - 1.0);
}

TEST(DgAggregate, MeanAndSum) {
  const std::vector<DGEvent> e = {{0.1, 0.2}, {0.2, 0.2}};
  EXPECT_NEAR(delayed_gratification(e, DgFormula::Fig6D, DgAggregate::Mean), 1.5, 1e-12);
  EXPECT_NEAR(delayed_gratification(e, DgFormula::Fig6D, DgAggregate::Sum), 3.0, 1e-12);
}

TEST(DgSegmentation, TelescopesToNetChange) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> t;
    double x = 0.5;
    for (int i = 0; i < 200; ++i) {
      x += (static_cast<double>(rng.below(5)) - 2.0) / 100.0;
      t.push_back(x);
    }
    const auto events = segment_dg_events(t);
    double net = initial_rise(t);
    for (const auto& e : events) net += e.rise - e.drop;
    EXPECT_NEAR(net, t.back() - t.front(), 1e-12);
  }
}

TEST(DgSegmentation, EveryStrictLocalMinimumIsAValley) {
  const std::vector<double> t = {1, 0, 2, 1, 3, 2, 2, 4, 3};
  const auto e = segment_dg_events(t);
  EXPECT_EQ(e.size(), 4u);
}

TEST(StepTotals, CountingConventions) {
  RunOutcome o;
  o.total_swaps = 10;
  o.total_comparisons = 7;
  EXPECT_EQ(step_totals(o, Counting::SwapsOnly), 10u);
  EXPECT_EQ(step_totals(o, Counting::SwapsPlusComparisons), 17u);
}
