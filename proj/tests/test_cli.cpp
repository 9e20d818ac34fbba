#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cellsort/experiments.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
};

Result cli(const std::string& args) {
  const auto capture = fs::temp_directory_path() / "cellsort_cli_output.txt";
  const std::string cmd = std::string(CELLSORT_CLI) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cellsort_cli_" + name);
  fs::remove_all(p);
  return p;
}

fs::path write_config(const std::string& name, const std::string& body) {
  auto p = fs::temp_directory_path() / ("cellsort_cli_" + name + ".cfg");
  std::ofstream(p) << "format = cellsort-config/1\n" << body;
  return p;
}

}  // namespace

TEST(Cli, RunPrintsSummaryAndWritesBattery) {
  const auto out = scratch("run");
  const auto r = cli("run --config " + std::string(CELLSORT_CONFIGS) + "/pure_cellview_bubble.cfg --out " +
                     out.string() + " --reps 3");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("swaps: mean="), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  EXPECT_EQ(cellsort::load_battery(out).rows.size(), 3u);
  fs::remove_all(out);
}

TEST(Cli, BadFrozenIndexExitsTwoNamingKey) {
  const auto cfg = write_config("badfrozen", "n = 10\nfrozen.placement = 10\n");
  const auto r = cli("run --config " + cfg.string() + " --out " + scratch("bad").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("frozen.placement"), std::string::npos);
}

TEST(Cli, MissingConfigFileExitsThree) {
  const auto r = cli("run --config /nonexistent/x.cfg --out " + scratch("missing").string());
  EXPECT_EQ(r.status, 3);
}

TEST(Cli, UsageErrorExitsTwo) {
  EXPECT_EQ(cli("frobnicate").status, 2);
  EXPECT_EQ(cli("run --config").status, 2);
  EXPECT_EQ(cli("--help").status, 0);
}

TEST(Cli, CompareBatteryWithItself) {
  const auto out = scratch("self");
  const auto cfg = write_config("self", "n = 20\nreps = 5\n");
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + out.string()).status, 0);
  const auto row = scratch("row.csv");
  const auto r = cli("compare " + out.string() + " " + out.string() + " --metric swaps --test z --out " + row.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("z=0 p=1"), std::string::npos) << r.out;
  std::ifstream in(row);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto t = cellsort::parse_csv(ss.str());
  EXPECT_EQ(t.rows.at(0)[t.column("statistic")], "0");
  EXPECT_EQ(cli("compare " + out.string() + " " + out.string() + " --metric speed").status, 2);
  EXPECT_EQ(cli("compare " + out.string() + " " + out.string() + " --test t --counting all").status, 0);
  fs::remove_all(out);
}

TEST(Cli, EvaluateReplaysTraces) {
  const auto out = scratch("eval");
  const auto cfg = write_config("eval", "n = 20\nreps = 3\npolicy = chimera\npolicy.mix = bubble, selection\n");
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + out.string()).status, 0);
  const auto r = cli("evaluate " + out.string() + " --metric swaps --metric peak_aggregation");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("traces replayed: 3, inconsistent: 0"), std::string::npos) << r.out;
  EXPECT_EQ(cli("evaluate /nonexistent/dir").status, 3);
  fs::remove_all(out);
}

TEST(Cli, ReportWritesTableAndChecksInputs) {
  const auto out = scratch("rep");
  const auto cfg = write_config("rep", "n = 20\nreps = 2\n");
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + out.string()).status, 0);
  const auto table = scratch("fig3.csv");
  EXPECT_EQ(cli("report fig3 " + out.string() + " --out " + table.string()).status, 0);
  std::ifstream in(table);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(cellsort::parse_csv(ss.str()).rows.size(), 2u * 101u);
  const auto missing = cli("report fig8 " + out.string());
  EXPECT_EQ(missing.status, 2);
  EXPECT_NE(missing.out.find("requires"), std::string::npos);
  EXPECT_EQ(cli("report fig6 " + out.string()).status, 2);
  fs::remove_all(out);
}

TEST(Cli, SeedOverrideChangesDigest) {
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  const auto cfg = write_config("seed", "n = 15\nreps = 2\n");
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + a.string() + " --seed 1").status, 0);
  ASSERT_EQ(cli("run --config " + cfg.string() + " --out " + b.string() + " --seed 2").status, 0);
  EXPECT_NE(cellsort::load_battery(a).digest, cellsort::load_battery(b).digest);
  fs::remove_all(a);
  fs::remove_all(b);
}
