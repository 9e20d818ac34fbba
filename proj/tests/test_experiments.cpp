#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cellsort/experiments.hpp"

using namespace cellsort;

namespace {

ExperimentConfig cfg(const std::string& body) { return parse_config("format = cellsort-config/1\n" + body); }

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cellsort_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(LargestRemainder, SplitsEvenly) {
  const std::vector<double> three(3, 1.0 / 3.0);
  EXPECT_EQ(largest_remainder(three, 100), (std::vector<int>{34, 33, 33}));
  const std::vector<double> halves = {0.5, 0.5};
  EXPECT_EQ(largest_remainder(halves, 101), (std::vector<int>{51, 50}));
  const std::vector<double> skew = {0.25, 0.75};
  EXPECT_EQ(largest_remainder(skew, 10), (std::vector<int>{3, 7}));
}

TEST(RunSetup, ChimeraCountsAreBalanced) {
  const auto c = cfg("policy = chimera\npolicy.mix = bubble, insertion, selection\n");
  const auto s = make_run_setup(c, 0);
  std::array<int, 3> counts{};
  for (const auto& cell : s.state.cells()) ++counts[static_cast<std::size_t>(cell.algotype)];
  for (int k : counts) EXPECT_TRUE(k == 33 || k == 34);
  EXPECT_EQ(counts[0] + counts[1] + counts[2], 100);
}

TEST(RunSetup, SeedLattice) {
  const auto c = cfg("n = 30\n");
  EXPECT_EQ(make_run_setup(c, 3).state.values(), make_run_setup(c, 3).state.values());
  EXPECT_NE(make_run_setup(c, 3).state.values(), make_run_setup(c, 4).state.values());
  EXPECT_EQ(make_run_setup(c, 3).seed, run_seed(c.seed, 3));
}

TEST(RunSetup, ModeDoesNotChangeInitialArrayOrFaults) {
  const auto a = make_run_setup(cfg("frozen.count = 3\n"), 5);
  const auto b = make_run_setup(cfg("frozen.count = 3\npolicy.mode = traditional\npolicy.algorithm = selection\n"), 5);
  EXPECT_EQ(a.state.values(), b.state.values());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.state.at(i).frozen, b.state.at(i).frozen);
}

TEST(RunSetup, FrozenPlacement) {
  const auto random = make_run_setup(cfg("frozen.count = 3\nfrozen.kind = immovable\n"), 0);
  int frozen = 0;
  for (const auto& cell : random.state.cells()) frozen += cell.frozen == FrozenKind::Immovable;
  EXPECT_EQ(frozen, 3);

  const auto pinned = make_run_setup(cfg("frozen.placement = 2, 7\n"), 0);
  EXPECT_EQ(pinned.state.at(2).frozen, FrozenKind::Movable);
  EXPECT_EQ(pinned.state.at(7).frozen, FrozenKind::Movable);

  auto positions = [](const RunSetup& s) {
    std::vector<int> p;
    for (int i = 0; i < s.state.length(); ++i)
      if (s.state.at(i).frozen != FrozenKind::Active) p.push_back(i);
    return p;
  };
  const auto fixed = cfg("frozen.count = 2\nfrozen.rerandomize = false\n");
  EXPECT_EQ(positions(make_run_setup(fixed, 0)), positions(make_run_setup(fixed, 1)));
  const auto moving = cfg("frozen.count = 2\n");
  EXPECT_NE(positions(make_run_setup(moving, 0)), positions(make_run_setup(moving, 1)));
}

TEST(RunSetup, DuplicatedValues) {
  const auto s = make_run_setup(cfg("values = duplicated\nvalues.lo = 1\nvalues.hi = 10\nvalues.copies = 10\n"), 0);
  std::map<int, int> counts;
  for (int v : s.state.values()) ++counts[v];
  ASSERT_EQ(counts.size(), 10u);
  for (auto [v, k] : counts) EXPECT_EQ(k, 10);
}

TEST(RunSetup, OpposedMixStartsInsideBand) {
  const auto c = cfg("policy = chimera\npolicy.mix = bubble:inc, insertion:dec\n");
  for (int i = 0; i < 20; ++i) {
    const double s = sortedness(make_run_setup(c, i).state, Direction::Increasing);
    EXPECT_GE(s, 0.45);
    EXPECT_LE(s, 0.55);
  }
}

TEST(ProgressGrid, SamplesByFraction) {
  std::vector<double> series(11);
  std::iota(series.begin(), series.end(), 0.0);
  const auto g = progress_grid(series);
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[50], 5.0);
  EXPECT_EQ(g.back(), 10.0);
  const std::vector<double> one = {0.4};
  EXPECT_EQ(progress_grid(one)[100], 0.4);
}

TEST(Battery, RowCountAndDeterminism) {
  const auto c = cfg("n = 30\nreps = 6\n");
  const auto a = run_battery(c);
  const auto b = run_battery(c);
  ASSERT_EQ(a.rows.size(), 6u);
  EXPECT_EQ(a.rows, b.rows);
  for (const auto& r : a.rows) EXPECT_EQ(r.terminated_by, TerminatedBy::FullySorted);
  EXPECT_TRUE(a.warnings.empty());
}

TEST(Battery, ThreadCountDoesNotChangeResults) {
  const auto c = cfg("n = 30\nreps = 8\npolicy = chimera\npolicy.mix = bubble, selection\n");
  EXPECT_EQ(run_battery(c, {std::nullopt, 1}).rows, run_battery(c, {std::nullopt, 4}).rows);
}

TEST(Battery, CapHitWhereSortingExpectedIsFlagged) {
  const auto c = cfg("n = 30\nreps = 2\nscheduler.max_activations = 10\n");
  const auto b = run_battery(c);
  EXPECT_EQ(b.warnings.size(), 2u);
  for (const auto& r : b.rows) EXPECT_EQ(r.terminated_by, TerminatedBy::ActivationCap);
}

TEST(Battery, WritesAndReloadsDirectory) {
  const auto dir = temp_dir("battery");
  const auto c = cfg("name = io\nn = 20\nreps = 4\npolicy = pseudo\n");
  const auto b = run_battery(c, {dir, 1});
  for (const char* f : {"config.cfg", "manifest.txt", "summary.csv", "trajectory.csv", "runs_trajectory.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(std::filesystem::exists(trace_path(dir, i)));
  const auto loaded = load_battery(dir);
  EXPECT_EQ(loaded.rows, b.rows);
  EXPECT_EQ(loaded.digest, b.digest);
  EXPECT_EQ(loaded.mean_aggregation, b.mean_aggregation);
  EXPECT_EQ(loaded.sortedness_grids, b.sortedness_grids);
  std::filesystem::remove_all(dir);
}

TEST(Battery, DigestMismatchIsDataError) {
  const auto dir = temp_dir("digest");
  run_battery(cfg("n = 10\nreps = 2\n"), {dir, 1});
  std::ofstream(dir / "config.cfg", std::ios::trunc) << "format = cellsort-config/1\nn = 11\nreps = 2\n";
  EXPECT_THROW(load_battery(dir), DataError);
  std::filesystem::remove_all(dir);
}

TEST(Battery, SummaryHasDocumentedColumns) {
  const auto t = summary_table(run_battery(cfg("n = 10\nreps = 2\n")).rows);
  for (const char* col : {"seed", "algorithms", "n", "frozen_count", "frozen_kind", "swaps", "comparisons",
                          "final_sortedness", "final_monotonicity_error", "dg_methods", "dg_fig6d", "peak_aggregation",
                          "terminated_by"})
    EXPECT_TRUE(t.has_column(col)) << col;
  const auto reparsed = parse_csv(t.to_string());
  EXPECT_EQ(reparsed.rows, t.rows);
}

TEST(Battery, MetricValuesAndCounting) {
  const auto b = run_battery(cfg("n = 20\nreps = 3\n"));
  const auto swaps = metric_values(b.rows, "steps", Counting::SwapsOnly);
  const auto all = metric_values(b.rows, "steps", Counting::SwapsPlusComparisons);
  for (std::size_t i = 0; i < swaps.size(); ++i)
    EXPECT_EQ(all[i], swaps[i] + static_cast<double>(b.rows[i].comparisons));
  EXPECT_THROW(metric_values(b.rows, "speed"), ConfigError);
}

TEST(AggregationTrajectory, RejectsSingleLabelBattery) {
  const auto b = run_battery(cfg("n = 10\nreps = 2\n"));
  EXPECT_THROW(aggregation_trajectory(b), ConfigError);
}

TEST(AggregationTrajectory, GridAndPeak) {
  const auto b = run_battery(cfg("n = 40\nreps = 5\npolicy = chimera\npolicy.mix = bubble, selection\n"));
  const auto t = aggregation_trajectory(b);
  ASSERT_EQ(t.points.size(), 101u);
  EXPECT_EQ(t.points.front().first, 0.0);
  EXPECT_EQ(t.points.back().first, 1.0);
  for (const auto& [x, y] : t.points) EXPECT_LE(y, t.peak);
}

TEST(OpposedBattery, RequiresTwoOpposedEntries) {
  EXPECT_THROW(opposed_directions_battery(cfg("policy = chimera\npolicy.mix = bubble, selection\n")), ConfigError);
  const auto b = opposed_directions_battery(cfg("n = 30\nreps = 3\npolicy = chimera\npolicy.mix = bubble:inc, insertion:dec\n"));
  for (const auto& r : b.rows) EXPECT_LT(r.final_sortedness, 1.0);
}

TEST(Replay, ReproducesSnapshotsAndDetectsTampering) {
  const auto c = cfg("n = 25\nreps = 1\npolicy = chimera\npolicy.mix = bubble, selection\nfrozen.count = 2\n");
  const auto setup = make_run_setup(c, 0);
  auto probe = Probe::in_memory();
  run(setup.state, setup.policy, setup.scheduler, probe);
  std::vector<TraceRecord> records(probe.records().begin(), probe.records().end());
  const auto rep = replay_trace(records);
  EXPECT_TRUE(rep.ok) << (rep.mismatches.empty() ? "" : rep.mismatches.front());
  EXPECT_EQ(rep.sortedness, probe.sortedness_trajectory());

  for (auto& r : records)
    if (auto* s = std::get_if<TraceSnapshot>(&r); s && s->trigger == SnapshotTrigger::Swap) {
      s->sortedness += 1e-9;
      break;
    }
  EXPECT_FALSE(replay_trace(records).ok);
}
