#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cellsort/engine.hpp"
#include "cellsort/probe.hpp"

using namespace cellsort;

namespace {

TraceHeader sample_header() {
  TraceHeader h;
  h.digest = "0123456789abcdef";
  h.seed = 18446744073709551615ULL;
  h.n = 3;
  h.mode = Mode::Traditional;
  h.controller = Algotype::Selection;
  h.controller_direction = Direction::Decreasing;
  h.reference_direction = Direction::Decreasing;
  h.values = {3, -1, 2};
  h.algotypes = {Algotype::Bubble, Algotype::Insertion, Algotype::Selection};
  h.labels = {0, 1, 2};
  h.directions = {Direction::Increasing, Direction::Decreasing, Direction::Increasing};
  h.frozen = {FrozenKind::Active, FrozenKind::Movable, FrozenKind::Immovable};
  return h;
}

std::vector<TraceRecord> sample_trace() {
  TraceEvent e{4, EventKind::SwapDenied, 2, 1, 2, -1, 2, Algotype::Insertion, Algotype::Selection};
  TraceSnapshot s{4, 1, SnapshotTrigger::Swap, 1.0 / 3.0, 1, 0.1};
  TraceFooter f{1, 2, 1, 7, 4, TerminatedBy::ActivationCap, {3, -1, 2}, {0, 1, 2}};
  return {sample_header(), e, s, f};
}

}  // namespace

TEST(TraceFormat, EveryRecordRoundTrips) {
  for (const auto& r : sample_trace()) EXPECT_EQ(parse_record(format_record(r)), r);
}

TEST(TraceFormat, EmptyListsAndDigest) {
  TraceHeader h;
  const auto text = format_record(h);
  EXPECT_EQ(parse_record(text), TraceRecord(h));
  TraceFooter f;
  EXPECT_EQ(parse_record(format_record(f)), TraceRecord(f));
}

TEST(TraceFormat, DoublesRoundTripExactly) {
  for (double x : {0.1, 1.0 / 3.0, 0.7300000000000001, 1e-300}) {
    TraceSnapshot s;
    s.sortedness = x;
    s.aggregation = x / 7;
    EXPECT_EQ(parse_record(format_record(s)), TraceRecord(s));
  }
}

TEST(TraceFormat, HeaderLeadsWithVersion) {
  const auto text = format_record(sample_header());
  EXPECT_EQ(text.rfind("HEADER\tcellsort-trace/1\t", 0), 0u);
}

TEST(TraceFormat, WrongFieldCountIsError) {
  EXPECT_THROW(parse_record("EVENT\t1\tswap"), TraceError);
  EXPECT_THROW(parse_record("BOGUS\t1"), TraceError);
}

TEST(TraceFormat, UnsupportedVersionNamed) {
  auto text = format_record(sample_header());
  text.replace(text.find("cellsort-trace/1"), 16, "cellsort-trace/9");
  try {
    parse_record(text, 1, "x.trace");
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("x.trace:1"), std::string::npos);
  }
}

TEST(TraceFormat, TruncatedTraceRejected) {
  const auto records = sample_trace();
  std::string text;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) text += format_record(records[i]) + "\n";
  std::istringstream in(text);
  try {
    parse_trace(in, "t");
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_NE(std::string(e.what()).find("FOOTER"), std::string::npos);
  }
}

TEST(TraceFormat, OrderingRules) {
  const auto records = sample_trace();
  std::string body = format_record(records[1]) + "\n" + format_record(records[3]) + "\n";
  std::istringstream no_header(body);
  EXPECT_THROW(parse_trace(no_header), TraceError);
  std::string text;
  for (const auto& r : records) text += format_record(r) + "\n";
  std::istringstream after_footer(text + format_record(records[1]) + "\n");
  EXPECT_THROW(parse_trace(after_footer), TraceError);
  std::istringstream ok(text);
  EXPECT_EQ(parse_trace(ok), records);
}

TEST(Probe, EnforcesHeaderFirstFooterLast) {
  Probe p;
  EXPECT_THROW(p.record(TraceEvent{}), ProbeUsageError);
  p.record(TraceHeader{});
  EXPECT_THROW(p.record(TraceHeader{}), ProbeUsageError);
  p.record(TraceFooter{});
  EXPECT_TRUE(p.finished());
  EXPECT_THROW(p.record(TraceEvent{}), ProbeUsageError);
}

TEST(Probe, SaveLoadRoundTripOfARealRun) {
  std::vector<int> v = {5, 3, 1, 4, 2, 6};
  auto probe = Probe::in_memory();
  SchedulerConfig s;
  s.seed = 8;
  run(make_array(v, Algotype::Selection), {}, s, probe, "abc");
  const auto path = std::filesystem::temp_directory_path() / "cellsort_probe_test.trace";
  save_trace(path, probe.records());
  const auto loaded = load_trace(path);
  std::filesystem::remove(path);
  ASSERT_EQ(loaded.size(), probe.records().size());
  EXPECT_TRUE(std::equal(loaded.begin(), loaded.end(), probe.records().begin()));
  EXPECT_EQ(std::get<TraceHeader>(loaded.front()).digest, "abc");
}

TEST(Probe, TrajectoryHasInitialPlusOnePerSwap) {
  std::vector<int> v = {4, 3, 2, 1};
  Probe probe;
  const auto out = run(make_array(v, Algotype::Bubble), {}, SchedulerConfig{}, probe);
  EXPECT_EQ(probe.sortedness_trajectory().size(), out.total_swaps + 1);
  EXPECT_DOUBLE_EQ(probe.sortedness_trajectory().front(), 0.25);
  EXPECT_DOUBLE_EQ(probe.sortedness_trajectory().back(), 1.0);
  EXPECT_EQ(probe.round_sortedness().size(), static_cast<std::size_t>(out.rounds));
}

TEST(Probe, MissingFileIsTraceError) {
  EXPECT_THROW(load_trace("/nonexistent/definitely/missing.trace"), TraceError);
}
