// cellsort: run batteries, evaluate stored traces, compare batteries and
// emit figure tables.
//
// Exit status: 0 success, 2 configuration or usage error, 3 I/O or stored
// data error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellsort.hpp"

namespace {

using namespace cellsort;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string counting = "swaps";
  std::string dg = "methods";
  unsigned threads = 1;
  std::vector<std::string> metrics;
  std::string metric = "steps";
  std::string test = "z";
  std::string dir_a, dir_b;
  std::string figure;
  std::vector<std::string> inputs;
  bool counting_set = false;
  bool dg_set = false;
};

Counting counting_of(const Options& o) {
  const auto c = parse_counting(o.counting);
  if (!c) throw ConfigError("--counting must be swaps or all", "counting");
  return *c;
}

DgFormula dg_of(const Options& o) {
  const auto d = parse_dg_formula(o.dg);
  if (!d) throw ConfigError("--dg must be methods or fig6d", "dg");
  return *d;
}

void print_summary_line(const std::string& metric, const std::vector<double>& v) {
  const auto s = summarize(v);
  std::cout << metric << ": mean=" << s.mean << " std=" << s.std << " n=" << s.n << '\n';
}

int cmd_run(const Options& o) {
  auto config = load_config(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.reps) config.reps = *o.reps;
  if (o.counting_set) config.counting = counting_of(o);
  if (o.dg_set) config.dg_formula = dg_of(o);
  validate(config);

  BatteryOptions opts;
  opts.out_dir = o.out;
  opts.threads = o.threads;
  const auto b = run_battery(config, opts);
  std::cout << "battery " << config.name << " (" << policy_label(config) << ", n=" << config.n
            << ", reps=" << config.reps << ", digest " << b.digest << ")\n";
  for (const auto& m : {"steps", "swaps", "comparisons", "final_sortedness", "final_monotonicity_error", "dg",
                        "peak_aggregation"})
    print_summary_line(m, metric_values(b, m));
  for (const auto& w : b.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_evaluate(const Options& o) {
  auto b = load_battery(o.dir_a);
  if (o.counting_set) b.config.counting = counting_of(o);
  if (o.dg_set) b.config.dg_formula = dg_of(o);
  std::size_t traces = 0, bad = 0;
  for (const auto& row : b.rows) {
    const auto path = trace_path(o.dir_a, row.run);
    if (!std::filesystem::exists(path)) continue;
    ++traces;
    const auto records = load_trace(path);
    const auto rep = replay_trace(records);
    if (!rep.ok) {
      ++bad;
      for (const auto& m : rep.mismatches) std::cerr << path.string() << ": " << m << '\n';
    }
  }
  std::cout << "traces replayed: " << traces << ", inconsistent: " << bad << '\n';
  const auto& metrics = o.metrics.empty() ? metric_names() : o.metrics;
  for (const auto& m : metrics) print_summary_line(m, metric_values(b, m));
  return bad ? kExitIo : 0;
}

int cmd_compare(const Options& o) {
  const auto a = load_battery(o.dir_a);
  const auto b = load_battery(o.dir_b);
  const auto counting = counting_of(o);
  const auto dg = dg_of(o);
  if (o.test != "z" && o.test != "t") throw ConfigError("--test must be z or t", "test");
  const auto va = metric_values(a.rows, o.metric, counting, dg);
  const auto vb = metric_values(b.rows, o.metric, counting, dg);
  const auto r = o.test == "z" ? z_test(va, vb) : welch_t_test(va, vb);
  const auto kind = o.test == "z" ? StdKind::Population : StdKind::Sample;
  const auto sa = summarize(va, kind);
  const auto sb = summarize(vb, kind);

  std::cout << "metric " << o.metric << " (" << to_string(counting) << "), " << (o.test == "z" ? "z-test" : "Welch t-test")
            << '\n';
  std::cout << "A " << o.dir_a << ": n=" << sa.n << " mean=" << sa.mean << " std=" << sa.std << '\n';
  std::cout << "B " << o.dir_b << ": n=" << sb.n << " mean=" << sb.mean << " std=" << sb.std << '\n';
  std::cout << (o.test == "z" ? "z=" : "t=") << r.statistic;
  if (o.test == "t") std::cout << " dof=" << r.dof;
  std::cout << " p=" << format_p(r.p_value) << (r.saturated ? " (saturated)" : "") << '\n';

  CsvTable t;
  t.columns = {"metric", "counting", "test", "n_a", "mean_a", "std_a", "n_b", "mean_b", "std_b", "statistic", "dof", "p"};
  t.rows.push_back({o.metric, std::string(to_string(counting)), o.test, std::to_string(sa.n), detail::format_double(sa.mean),
                    detail::format_double(sa.std), std::to_string(sb.n), detail::format_double(sb.mean), detail::format_double(sb.std),
                    detail::format_double(r.statistic), std::isnan(r.dof) ? "" : detail::format_double(r.dof), format_p(r.p_value)});
  if (!o.out.empty()) detail::write_file(o.out, t.to_string());
  else std::cout << t.to_string();
  return 0;
}

int cmd_report(const Options& o) {
  const auto& ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), o.figure) == ids.end())
    throw ConfigError("unknown figure id '" + o.figure + "'", "figure");
  std::vector<BatterySummary> batteries;
  for (const auto& dir : o.inputs) batteries.push_back(load_battery(dir));
  const auto table = report(o.figure, batteries, {counting_of(o), dg_of(o)});
  if (!o.out.empty()) detail::write_file(o.out, table.to_string());
  else std::cout << table.to_string();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-view sorting laboratory"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run the battery described by a config file");
  run->add_option("--config", o.config_path, "Config file")->required();
  run->add_option("--out", o.out, "Output directory")->required();
  run->add_option("--seed", o.seed, "Override the master seed");
  run->add_option("--reps", o.reps, "Override the replicate count");
  run->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* evaluate = app.add_subcommand("evaluate", "Replay stored traces and summarise a battery");
  evaluate->add_option("dir", o.dir_a, "Battery directory")->required();
  evaluate->add_option("--metric", o.metrics, "Metrics to summarise (default: all)");

  auto* compare = app.add_subcommand("compare", "Test one metric between two batteries");
  compare->add_option("a", o.dir_a, "First battery directory")->required();
  compare->add_option("b", o.dir_b, "Second battery directory")->required();
  compare->add_option("--metric", o.metric, "Metric (default: steps)");
  compare->add_option("--test", o.test, "z or t");
  compare->add_option("--out", o.out, "Write the result row to this CSV file");

  auto* rep = app.add_subcommand("report", "Emit the plot-ready table for a figure");
  rep->add_option("figure", o.figure, "fig3, fig4, fig5, fig7, fig8 or fig9")->required();
  rep->add_option("inputs", o.inputs, "Battery directories")->required();
  rep->add_option("--out", o.out, "Output CSV file (default: stdout)");

  for (auto* sub : {run, evaluate, compare, rep}) {
    sub->add_option("--counting", o.counting, "swaps or all");
    sub->add_option("--dg", o.dg, "methods or fig6d");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  for (auto* sub : {run, evaluate, compare, rep}) {
    o.counting_set |= sub->count("--counting") > 0;
    o.dg_set |= sub->count("--dg") > 0;
  }

  try {
    if (*run) return cmd_run(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*compare) return cmd_compare(o);
    return cmd_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    std::cerr << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const StatsError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitIo;
  } catch (const TraceError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}
