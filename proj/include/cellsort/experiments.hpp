// experiments.hpp: batteries of seeded runs, their on-disk layout, and
// trace replay.
//
// Output directory layout (see docs/config-format.md):
//   config.cfg            canonical config text
//   manifest.txt          format, digest, run count, warnings
//   summary.csv           one row per run
//   trajectory.csv        mean Sortedness / Aggregation on a 101-point progress grid
//   runs_trajectory.csv   the same grid for every run
//   traces/run_NNNN.trace one trace per run
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cellsort/config.hpp"
#include "cellsort/core.hpp"
#include "cellsort/engine.hpp"
#include "cellsort/metrics.hpp"
#include "cellsort/probe.hpp"
#include "cellsort/rng.hpp"
#include "cellsort/stats.hpp"

namespace cellsort {

inline constexpr std::string_view kBatteryFormatVersion = "cellsort-battery/1";
inline constexpr int kProgressGridPoints = 101;

/// Stored battery output that is missing, malformed or inconsistent.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Run setup

struct RunSetup {
  std::uint64_t seed = 0;
  CellArrayState state;
  PolicySpec policy;
  SchedulerConfig scheduler;
};

/// Splits n items by proportion: floors first, leftovers to the largest
/// fractional parts (ties to the earlier entry).
inline std::vector<int> largest_remainder(std::span<const double> proportions, int n) {
  std::vector<int> counts(proportions.size());
  std::vector<std::pair<double, std::size_t>> rest;
  int assigned = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    const double exact = proportions[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    rest.emplace_back(exact - counts[i], i);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[rest[k % rest.size()].second];
  return counts;
}

/// Builds run `run_index` of a battery. Randomness is drawn in a fixed order
/// (values, then algotype/label assignment, then frozen positions) from
/// mt19937_64(run_seed(seed, run_index)), so pure batteries that differ only
/// in mode or algorithm see the same initial arrays and frozen positions.
inline RunSetup make_run_setup(const ExperimentConfig& c, int run_index) {
  RunSetup setup;
  setup.seed = run_seed(c.seed, static_cast<std::uint64_t>(run_index));
  Rng rng(setup.seed);
  const auto n = static_cast<std::size_t>(c.n);

  std::vector<int> values;
  values.reserve(n);
  if (c.values.kind == ValueScheme::Kind::DistinctPermutation) {
    for (int v = 1; v <= c.n; ++v) values.push_back(v);
  } else {
    for (int v = c.values.lo; v <= c.values.hi; ++v)
      for (int k = 0; k < c.values.copies; ++k) values.push_back(v);
  }
  constexpr int kMaxShuffles = 100000;
  for (int attempt = 0;; ++attempt) {
    rng.shuffle(std::span<int>(values));
    if (!c.initial_band) break;
    const double s = sortedness(values, Direction::Increasing);
    if (s >= c.initial_band->first && s <= c.initial_band->second) break;
    if (attempt + 1 == kMaxShuffles)
      throw ConfigError("no initial shuffle fell inside the requested Sortedness band",
                        "initial.sortedness");
  }

  std::vector<Algotype> algotypes;
  std::vector<Direction> directions;
  std::vector<int> labels;
  const auto& p = c.policy;
  switch (p.kind) {
    case PolicyScheme::Kind::Pure:
      algotypes = {p.algorithm};
      directions = {p.direction};
      labels.assign(n, 0);
      break;
    case PolicyScheme::Kind::PseudoChimera: {
      algotypes = {p.algorithm};
      directions = {p.direction};
      const std::vector<double> even(static_cast<std::size_t>(p.labels), 1.0 / p.labels);
      const auto counts = largest_remainder(even, c.n);
      for (std::size_t l = 0; l < counts.size(); ++l) labels.insert(labels.end(), counts[l], static_cast<int>(l));
      rng.shuffle(std::span<int>(labels));
      break;
    }
    case PolicyScheme::Kind::Chimera: {
      std::vector<double> props;
      for (const auto& e : p.mix) props.push_back(e.proportion);
      const auto counts = largest_remainder(props, c.n);
      std::vector<int> entry;
      for (std::size_t k = 0; k < counts.size(); ++k) entry.insert(entry.end(), counts[k], static_cast<int>(k));
      rng.shuffle(std::span<int>(entry));
      for (int k : entry) {
        algotypes.push_back(p.mix[static_cast<std::size_t>(k)].algotype);
        directions.push_back(p.mix[static_cast<std::size_t>(k)].direction);
        labels.push_back(k);
      }
      break;
    }
  }

  std::vector<std::pair<int, FrozenKind>> frozen;
  if (c.frozen.placement == FrozenConfig::Placement::ExplicitIndices) {
    for (int i : c.frozen.indices) frozen.emplace_back(i, c.frozen.kind);
  } else if (c.frozen.count > 0) {
    Rng fixed(splitmix64(c.seed ^ 0xA24BAED4963EE407ULL));
    Rng& source = c.frozen.rerandomize ? rng : fixed;
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    for (int i = 0; i < c.frozen.count; ++i) {
      const auto j = static_cast<std::size_t>(i) + source.below(n - static_cast<std::size_t>(i));
      std::swap(pos[static_cast<std::size_t>(i)], pos[j]);
      frozen.emplace_back(pos[static_cast<std::size_t>(i)], c.frozen.kind);
    }
  }

  setup.state = make_array(values, algotypes, directions, frozen, labels);
  setup.policy = {p.mode, p.algorithm, p.direction};
  setup.scheduler = c.scheduler;
  setup.scheduler.seed = splitmix64(setup.seed ^ 0xD1B54A32D192ED03ULL);
  return setup;
}

// ---------------------------------------------------------------------------
// Per-run results

struct RunRow {
  int run = 0;
  std::uint64_t seed = 0;
  std::string algorithms;
  int n = 0;
  int frozen_count = 0;
  std::string frozen_kind = "none";
  std::uint64_t swaps = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t denied = 0;
  std::uint64_t activations = 0;
  int rounds = 0;
  double initial_sortedness = 0.0;
  double final_sortedness = 0.0;
  int final_monotonicity_error = 0;
  double dg_methods = 0.0;
  double dg_fig6d = 0.0;
  int dg_events = 0;
  double final_aggregation = 0.0;
  double peak_aggregation = 0.0;
  double peak_position = 0.0;
  TerminatedBy terminated_by = TerminatedBy::Quiescent;

  bool operator==(const RunRow&) const = default;
};

/// Samples a per-swap series (initial value plus one per swap) at 101 evenly
/// spaced fractions of the run's own swap count.
inline std::vector<double> progress_grid(std::span<const double> series) {
  std::vector<double> grid(kProgressGridPoints, series.empty() ? 0.0 : series.front());
  if (series.size() < 2) return grid;
  const double m = static_cast<double>(series.size() - 1);
  for (int g = 0; g < kProgressGridPoints; ++g)
    grid[static_cast<std::size_t>(g)] =
        series[static_cast<std::size_t>(std::llround(m * g / (kProgressGridPoints - 1)))];
  return grid;
}

struct RunResult {
  RunRow row;
  std::vector<double> sortedness_grid;
  std::vector<double> aggregation_grid;
  std::vector<double> round_sortedness;
};

inline RunResult summarize_run(const ExperimentConfig& c, int run_index, const RunSetup& setup,
                               const RunOutcome& out, const Probe& probe) {
  RunResult r;
  RunRow& row = r.row;
  row.run = run_index;
  row.seed = setup.seed;
  row.algorithms = policy_label(c);
  row.n = c.n;
  row.frozen_count = c.frozen_count();
  row.frozen_kind = row.frozen_count ? std::string(to_string(c.frozen.kind)) : "none";
  row.swaps = out.total_swaps;
  row.comparisons = out.total_comparisons;
  row.denied = out.total_denied;
  row.activations = out.activations;
  row.rounds = out.rounds;
  row.terminated_by = out.terminated_by;

  const auto& s = probe.sortedness_trajectory();
  const auto& a = probe.aggregation_trajectory();
  const Direction ref = reference_direction(setup.state, setup.policy);
  const auto final_values = out.final_state.values();
  row.initial_sortedness = s.front();
  row.final_sortedness = sortedness(final_values, ref);
  row.final_monotonicity_error = monotonicity_error(final_values, ref);
  const auto events = segment_dg_events(s);
  row.dg_events = static_cast<int>(events.size());
  row.dg_methods = delayed_gratification(events, DgFormula::Methods, c.dg_aggregate);
  row.dg_fig6d = delayed_gratification(events, DgFormula::Fig6D, c.dg_aggregate);
  row.final_aggregation = a.back();
  const auto peak = std::max_element(a.begin(), a.end());
  row.peak_aggregation = *peak;
  row.peak_position = a.size() > 1 ? static_cast<double>(peak - a.begin()) / static_cast<double>(a.size() - 1) : 0.0;

  r.sortedness_grid = progress_grid(s);
  r.aggregation_grid = progress_grid(a);
  r.round_sortedness = probe.round_sortedness();
  return r;
}

inline std::filesystem::path trace_path(const std::filesystem::path& dir, int run_index) {
  char name[32];
  std::snprintf(name, sizeof name, "run_%04d.trace", run_index);
  return dir / "traces" / name;
}

/// Executes one run; writes its trace when `trace_file` is set.
inline RunResult execute_run(const ExperimentConfig& c, int run_index,
                             const std::optional<std::filesystem::path>& trace_file = std::nullopt,
                             const std::string& digest = {}) {
  const auto setup = make_run_setup(c, run_index);
  std::ofstream file;
  if (trace_file) {
    file.open(*trace_file, std::ios::binary | std::ios::trunc);
    if (!file) throw std::ios_base::failure("cannot write " + trace_file->string());
  }
  Probe probe(trace_file ? &file : nullptr);
  const auto out = run(setup.state, setup.policy, setup.scheduler, probe, digest);
  if (trace_file) {
    file.close();
    if (!file) throw std::ios_base::failure("cannot write " + trace_file->string());
  }
  return summarize_run(c, run_index, setup, out, probe);
}

// ---------------------------------------------------------------------------
// Batteries

struct BatterySummary {
  ExperimentConfig config;
  std::string digest;
  std::vector<RunRow> rows;
  std::vector<std::vector<double>> sortedness_grids;   // per run
  std::vector<std::vector<double>> aggregation_grids;  // per run
  std::vector<double> mean_sortedness;                  // 101 points
  std::vector<double> mean_aggregation;                 // 101 points
  /// Per-run Sortedness at each round end; not persisted to disk.
  std::vector<std::vector<double>> round_sortedness;
  std::vector<std::string> warnings;
};

/// Names accepted by metric_values: the numeric summary columns plus
/// "steps" (swaps, or swaps + comparisons under Counting::SwapsPlusComparisons)
/// and "dg" (the config's chosen formula).
inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "steps", "swaps", "comparisons", "denied", "activations", "rounds",
      "initial_sortedness", "final_sortedness", "final_monotonicity_error", "dg", "dg_methods",
      "dg_fig6d", "dg_events", "final_aggregation", "peak_aggregation", "peak_position"};
  return names;
}

inline std::vector<double> metric_values(std::span<const RunRow> rows, std::string_view metric,
                                         Counting counting = Counting::SwapsOnly,
                                         DgFormula dg = DgFormula::Methods) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double v;
    if (metric == "steps")
      v = static_cast<double>(r.swaps + (counting == Counting::SwapsOnly ? 0 : r.comparisons));
    else if (metric == "swaps") v = static_cast<double>(r.swaps);
    else if (metric == "comparisons") v = static_cast<double>(r.comparisons);
    else if (metric == "denied") v = static_cast<double>(r.denied);
    else if (metric == "activations") v = static_cast<double>(r.activations);
    else if (metric == "rounds") v = r.rounds;
    else if (metric == "initial_sortedness") v = r.initial_sortedness;
    else if (metric == "final_sortedness") v = r.final_sortedness;
    else if (metric == "final_monotonicity_error") v = r.final_monotonicity_error;
    else if (metric == "dg") v = dg == DgFormula::Methods ? r.dg_methods : r.dg_fig6d;
    else if (metric == "dg_methods") v = r.dg_methods;
    else if (metric == "dg_fig6d") v = r.dg_fig6d;
    else if (metric == "dg_events") v = r.dg_events;
    else if (metric == "final_aggregation") v = r.final_aggregation;
    else if (metric == "peak_aggregation") v = r.peak_aggregation;
    else if (metric == "peak_position") v = r.peak_position;
    else throw ConfigError("unknown metric '" + std::string(metric) + "'", "metric");
    out.push_back(v);
  }
  return out;
}

inline std::vector<double> metric_values(const BatterySummary& b, std::string_view metric) {
  return metric_values(b.rows, metric, b.config.counting, b.config.dg_formula);
}

inline SampleSummary metric_summary(const BatterySummary& b, std::string_view metric) {
  const auto v = metric_values(b, metric);
  return summarize(v);
}

namespace detail {
inline std::vector<double> mean_grid(const std::vector<std::vector<double>>& grids) {
  std::vector<double> mean(kProgressGridPoints, 0.0);
  if (grids.empty()) return mean;
  for (const auto& g : grids)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += g[i];
  for (auto& x : mean) x /= static_cast<double>(grids.size());
  return mean;
}

inline bool sorting_expected(const ExperimentConfig& c) {
  return !c.opposed() && !(c.frozen_count() > 0 && c.frozen.kind == FrozenKind::Immovable);
}
}  // namespace detail

inline void write_battery(const BatterySummary& b, const std::filesystem::path& dir);

struct BatteryOptions {
  /// Where to write traces and tables; nothing is written when empty.
  std::optional<std::filesystem::path> out_dir;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

inline BatterySummary run_battery(const ExperimentConfig& config, const BatteryOptions& options = {}) {
  validate(config);
  BatterySummary b;
  b.config = config;
  b.digest = config_digest(config);
  if (options.out_dir) std::filesystem::create_directories(*options.out_dir / "traces");

  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<RunResult> results(reps);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < reps;) {
      try {
        std::optional<std::filesystem::path> trace;
        if (options.out_dir) trace = trace_path(*options.out_dir, static_cast<int>(i));
        results[i] = execute_run(config, static_cast<int>(i), trace, b.digest);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = reps;
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (auto& r : results) {
    if (r.row.terminated_by == TerminatedBy::ActivationCap && detail::sorting_expected(config))
      b.warnings.push_back("run " + std::to_string(r.row.run) +
                           " hit the activation cap although full sorting was expected");
    b.rows.push_back(std::move(r.row));
    b.sortedness_grids.push_back(std::move(r.sortedness_grid));
    b.aggregation_grids.push_back(std::move(r.aggregation_grid));
    b.round_sortedness.push_back(std::move(r.round_sortedness));
  }
  b.mean_sortedness = detail::mean_grid(b.sortedness_grids);
  b.mean_aggregation = detail::mean_grid(b.aggregation_grids);
  if (options.out_dir) write_battery(b, *options.out_dir);
  return b;
}

/// Opposed-direction chimera battery; the initial Sortedness band defaults to
/// [0.45, 0.55] when the config leaves it unset.
inline BatterySummary opposed_directions_battery(ExperimentConfig config, const BatteryOptions& options = {}) {
  const auto& mix = config.policy.mix;
  if (config.policy.kind != PolicyScheme::Kind::Chimera || mix.size() != 2 ||
      mix[0].direction == mix[1].direction)
    throw ConfigError("opposed-direction batteries need exactly two mix entries with opposite directions",
                      "policy.mix");
  if (!config.initial_band) config.initial_band = std::pair{0.45, 0.55};
  return run_battery(config, options);
}

struct AggregationTrajectory {
  std::vector<std::pair<double, double>> points;  // (progress fraction, mean aggregation)
  double peak = 0.0;
  double peak_position = 0.0;
};

inline AggregationTrajectory aggregation_trajectory(const BatterySummary& b) {
  if (b.config.policy.kind == PolicyScheme::Kind::Pure)
    throw ConfigError("aggregation is undefined for a single-label battery", "policy");
  AggregationTrajectory t;
  for (int g = 0; g < kProgressGridPoints; ++g) {
    const double x = b.mean_aggregation[static_cast<std::size_t>(g)];
    t.points.emplace_back(static_cast<double>(g) / (kProgressGridPoints - 1), x);
    if (g == 0 || x > t.peak) {
      t.peak = x;
      t.peak_position = t.points.back().first;
    }
  }
  return t;
}

/// Two-sample test of one metric between batteries.
enum class TestKind { Z, Welch };

inline TestResult compare_batteries(const BatterySummary& a, const BatterySummary& b, std::string_view metric,
                                    TestKind test, Counting counting) {
  const auto va = metric_values(a.rows, metric, counting, a.config.dg_formula);
  const auto vb = metric_values(b.rows, metric, counting, b.config.dg_formula);
  return test == TestKind::Z ? z_test(va, vb) : welch_t_test(va, vb);
}

// ---------------------------------------------------------------------------
// Tables on disk

namespace detail {
inline std::string fmt(double x) { return format_double(x); }

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace detail

/// A comma-separated table with a header row. Cells never contain commas.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw DataError("table has no column '" + std::string(name) + "'");
  }
  bool has_column(std::string_view name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
  }
  std::string to_string() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline CsvTable parse_csv(std::string_view text, std::string_view source = "<csv>") {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split(line, ',');
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size())
      throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(t.columns.size()) + " fields, got " + std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.columns.empty()) throw DataError(std::string(source) + ": empty table");
  return t;
}

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "seed", "algorithms", "n", "frozen_count", "frozen_kind", "swaps", "comparisons",
      "final_sortedness", "final_monotonicity_error", "dg_methods", "dg_fig6d", "peak_aggregation",
      "terminated_by", "run", "denied", "activations", "rounds", "initial_sortedness", "dg_events",
      "final_aggregation", "peak_position"};
  return cols;
}

inline CsvTable summary_table(std::span<const RunRow> rows) {
  using detail::fmt;
  CsvTable t;
  t.columns = summary_columns();
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.seed), r.algorithms, std::to_string(r.n), std::to_string(r.frozen_count),
                      r.frozen_kind, std::to_string(r.swaps), std::to_string(r.comparisons),
                      fmt(r.final_sortedness), std::to_string(r.final_monotonicity_error), fmt(r.dg_methods),
                      fmt(r.dg_fig6d), fmt(r.peak_aggregation), std::string(to_string(r.terminated_by)),
                      std::to_string(r.run), std::to_string(r.denied), std::to_string(r.activations),
                      std::to_string(r.rounds), fmt(r.initial_sortedness), std::to_string(r.dg_events),
                      fmt(r.final_aggregation), fmt(r.peak_position)});
  return t;
}

inline std::vector<RunRow> parse_summary(const CsvTable& t, std::string_view source = "summary.csv") {
  for (const auto& c : summary_columns())
    if (!t.has_column(c)) throw DataError(std::string(source) + ": missing column '" + c + "'");
  std::vector<RunRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& cells = t.rows[i];
    auto get = [&](std::string_view col) -> const std::string& { return cells[t.column(col)]; };
    auto num = [&]<class T>(std::string_view col, T) {
      try {
        return detail::parse_number<T>(get(col), std::string(col));
      } catch (const ConfigError&) {
        throw DataError(std::string(source) + ": row " + std::to_string(i + 1) + ": bad " + std::string(col));
      }
    };
    RunRow r;
    r.seed = num("seed", std::uint64_t{});
    r.algorithms = get("algorithms");
    r.n = num("n", int{});
    r.frozen_count = num("frozen_count", int{});
    r.frozen_kind = get("frozen_kind");
    r.swaps = num("swaps", std::uint64_t{});
    r.comparisons = num("comparisons", std::uint64_t{});
    r.final_sortedness = num("final_sortedness", double{});
    r.final_monotonicity_error = num("final_monotonicity_error", int{});
    r.dg_methods = num("dg_methods", double{});
    r.dg_fig6d = num("dg_fig6d", double{});
    r.peak_aggregation = num("peak_aggregation", double{});
    const auto term = parse_terminated_by(get("terminated_by"));
    if (!term) throw DataError(std::string(source) + ": row " + std::to_string(i + 1) + ": bad terminated_by");
    r.terminated_by = *term;
    r.run = num("run", int{});
    r.denied = num("denied", std::uint64_t{});
    r.activations = num("activations", std::uint64_t{});
    r.rounds = num("rounds", int{});
    r.initial_sortedness = num("initial_sortedness", double{});
    r.dg_events = num("dg_events", int{});
    r.final_aggregation = num("final_aggregation", double{});
    r.peak_position = num("peak_position", double{});
    rows.push_back(std::move(r));
  }
  return rows;
}

inline CsvTable mean_trajectory_table(const BatterySummary& b) {
  CsvTable t;
  t.columns = {"progress", "mean_sortedness", "mean_aggregation"};
  for (int g = 0; g < kProgressGridPoints; ++g) {
    const auto i = static_cast<std::size_t>(g);
    t.rows.push_back({detail::fmt(g / 100.0), detail::fmt(b.mean_sortedness[i]), detail::fmt(b.mean_aggregation[i])});
  }
  return t;
}

inline CsvTable run_trajectory_table(const BatterySummary& b) {
  CsvTable t;
  t.columns = {"run", "progress", "sortedness", "aggregation"};
  for (std::size_t r = 0; r < b.rows.size(); ++r)
    for (int g = 0; g < kProgressGridPoints; ++g) {
      const auto i = static_cast<std::size_t>(g);
      t.rows.push_back({std::to_string(b.rows[r].run), detail::fmt(g / 100.0),
                        detail::fmt(b.sortedness_grids[r][i]), detail::fmt(b.aggregation_grids[r][i])});
    }
  return t;
}

inline void write_battery(const BatterySummary& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_file(dir / "config.cfg", to_text(b.config));
  std::string manifest;
  manifest += "format = " + std::string(kBatteryFormatVersion) + "\n";
  manifest += "digest = " + b.digest + "\n";
  manifest += "runs = " + std::to_string(b.rows.size()) + "\n";
  for (const auto& w : b.warnings) manifest += "warning = " + w + "\n";
  detail::write_file(dir / "manifest.txt", manifest);
  detail::write_file(dir / "summary.csv", summary_table(b.rows).to_string());
  detail::write_file(dir / "trajectory.csv", mean_trajectory_table(b).to_string());
  detail::write_file(dir / "runs_trajectory.csv", run_trajectory_table(b).to_string());
}

/// Reads a battery directory written by run_battery. Checks that the
/// manifest digest matches config.cfg and every trace header present.
inline BatterySummary load_battery(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::ios_base::failure("not a battery directory: " + dir.string());
  BatterySummary b;
  try {
    b.config = parse_config(detail::read_file(dir / "config.cfg"));
  } catch (const ConfigError& e) {
    throw DataError((dir / "config.cfg").string() + ": " + e.what());
  }
  b.digest = config_digest(b.config);

  std::istringstream manifest(detail::read_file(dir / "manifest.txt"));
  std::string line, format, digest;
  while (std::getline(manifest, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key == "format") format = value;
    else if (key == "digest") digest = value;
    else if (key == "warning") b.warnings.push_back(value);
  }
  if (format != kBatteryFormatVersion) throw DataError((dir / "manifest.txt").string() + ": unsupported format '" + format + "'");
  if (digest != b.digest)
    throw DataError((dir / "manifest.txt").string() + ": digest " + digest + " does not match config.cfg (" + b.digest + ")");

  b.rows = parse_summary(parse_csv(detail::read_file(dir / "summary.csv"), (dir / "summary.csv").string()));

  const auto runs = parse_csv(detail::read_file(dir / "runs_trajectory.csv"), (dir / "runs_trajectory.csv").string());
  b.sortedness_grids.assign(b.rows.size(), std::vector<double>(kProgressGridPoints));
  b.aggregation_grids.assign(b.rows.size(), std::vector<double>(kProgressGridPoints));
  if (runs.rows.size() != b.rows.size() * kProgressGridPoints)
    throw DataError((dir / "runs_trajectory.csv").string() + ": expected " +
                    std::to_string(b.rows.size() * kProgressGridPoints) + " rows");
  for (std::size_t k = 0; k < runs.rows.size(); ++k) {
    const auto& cells = runs.rows[k];
    try {
      b.sortedness_grids[k / kProgressGridPoints][k % kProgressGridPoints] =
          detail::parse_number<double>(cells[runs.column("sortedness")], "sortedness");
      b.aggregation_grids[k / kProgressGridPoints][k % kProgressGridPoints] =
          detail::parse_number<double>(cells[runs.column("aggregation")], "aggregation");
    } catch (const ConfigError&) {
      throw DataError((dir / "runs_trajectory.csv").string() + ": bad number on row " + std::to_string(k + 1));
    }
  }
  b.mean_sortedness = detail::mean_grid(b.sortedness_grids);
  b.mean_aggregation = detail::mean_grid(b.aggregation_grids);

  for (const auto& row : b.rows) {
    const auto path = trace_path(dir, row.run);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    const auto rec = parse_record(first, 1, path.string());
    const auto* h = std::get_if<TraceHeader>(&rec);
    if (!h || h->digest != b.digest)
      throw DataError(path.string() + ": trace digest does not match the battery config");
  }
  return b;
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayReport {
  bool ok = true;
  std::vector<std::string> mismatches;
  std::size_t swaps = 0;
  std::size_t snapshots = 0;
  std::vector<double> sortedness;  // initial + one per swap, recomputed
  std::vector<int> final_values;
};

/// Re-applies the recorded swaps to the header's initial array and recomputes
/// every snapshot's metrics; any difference from the recorded values, or from
/// the footer totals, is reported.
inline ReplayReport replay_trace(std::span<const TraceRecord> records) {
  ReplayReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    if (rep.mismatches.size() < 20) rep.mismatches.push_back(std::move(msg));
  };
  if (records.empty() || !std::holds_alternative<TraceHeader>(records.front())) {
    fail("trace does not start with HEADER");
    return rep;
  }
  const auto& h = std::get<TraceHeader>(records.front());
  std::vector<int> values = h.values;
  std::vector<int> labels = h.labels;
  const Direction ref = h.reference_direction;
  std::uint64_t compares = 0, denied = 0;
  bool footer = false;

  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& r = records[k];
    if (const auto* e = std::get_if<TraceEvent>(&r)) {
      const auto a = static_cast<std::size_t>(e->index_a), b = static_cast<std::size_t>(e->index_b);
      if (a >= values.size() || b >= values.size()) {
        fail("record " + std::to_string(k) + ": index out of range");
        continue;
      }
      if (values[a] != e->value_a || values[b] != e->value_b)
        fail("record " + std::to_string(k) + ": event values differ from replayed array");
      if (e->kind == EventKind::Swap) {
        std::swap(values[a], values[b]);
        std::swap(labels[a], labels[b]);
        ++rep.swaps;
      } else if (e->kind == EventKind::Compare) {
        ++compares;
      } else {
        ++denied;
      }
    } else if (const auto* s = std::get_if<TraceSnapshot>(&r)) {
      ++rep.snapshots;
      const double so = sortedness(values, ref);
      const int mo = monotonicity_error(values, ref);
      const double ag = labels.size() >= 2 ? aggregation_value(labels) : 0.0;
      if (so != s->sortedness || mo != s->monotonicity_error || ag != s->aggregation)
        fail("record " + std::to_string(k) + ": snapshot metrics differ from replay");
      if (s->trigger != SnapshotTrigger::Round) rep.sortedness.push_back(so);
    } else if (const auto* f = std::get_if<TraceFooter>(&r)) {
      footer = true;
      if (f->swaps != rep.swaps || f->comparisons != compares || f->denied != denied)
        fail("footer totals differ from the recorded events");
      if (f->final_values != values) fail("footer final values differ from replay");
    }
  }
  if (!footer) fail("trace has no FOOTER");
  rep.final_values = std::move(values);
  return rep;
}

}  // namespace cellsort
