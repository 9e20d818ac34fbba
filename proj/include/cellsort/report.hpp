// report.hpp: plot-ready tables for each figure id (fig3, fig4, fig5, fig7,
// fig8, fig9). Column meanings are listed in docs/figures.md.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cellsort/experiments.hpp"
#include "cellsort/stats.hpp"

namespace cellsort {

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig3", "fig4", "fig5", "fig7", "fig8", "fig9"};
  return ids;
}

struct ReportOptions {
  Counting counting = Counting::SwapsOnly;
  DgFormula dg = DgFormula::Methods;
};

namespace detail {

inline std::string mode_of(const BatterySummary& b) { return std::string(to_string(b.config.policy.mode)); }

inline void require(bool ok, std::string_view figure, std::string_view what) {
  if (!ok) throw ConfigError(std::string(figure) + " requires " + std::string(what), "inputs");
}

/// Per-run Sortedness on the progress grid, every run of every battery.
inline CsvTable fig3(std::span<const BatterySummary> in) {
  require(!in.empty(), "fig3", "at least one battery");
  CsvTable t;
  t.columns = {"battery", "algorithms", "run", "progress", "sortedness"};
  for (const auto& b : in)
    for (std::size_t r = 0; r < b.rows.size(); ++r)
      for (int g = 0; g < kProgressGridPoints; ++g)
        t.rows.push_back({b.config.name, b.rows[r].algorithms, std::to_string(b.rows[r].run), fmt(g / 100.0),
                          fmt(b.sortedness_grids[r][static_cast<std::size_t>(g)])});
  return t;
}

/// Mean and std of total steps; each cell-view battery is tested against the
/// traditional battery of the same algorithm when one is given.
inline CsvTable fig4(std::span<const BatterySummary> in, const ReportOptions& o) {
  require(!in.empty(), "fig4", "at least one pure battery");
  CsvTable t;
  t.columns = {"battery", "algorithms", "mode", "counting", "n", "mean_steps", "std_steps", "z_vs_traditional",
               "p_vs_traditional"};
  for (const auto& b : in) {
    require(b.config.policy.kind == PolicyScheme::Kind::Pure, "fig4", "pure batteries only");
    const auto steps = metric_values(b.rows, "steps", o.counting);
    const auto s = summarize(steps);
    std::string z, p;
    if (b.config.policy.mode == Mode::CellView) {
      for (const auto& other : in) {
        if (other.config.policy.mode != Mode::Traditional || other.config.policy.algorithm != b.config.policy.algorithm)
          continue;
        const auto r = z_test(steps, metric_values(other.rows, "steps", o.counting));
        z = fmt(r.statistic);
        p = format_p(r.p_value);
        break;
      }
    }
    t.rows.push_back({b.config.name, b.rows.front().algorithms, mode_of(b), std::string(to_string(o.counting)),
                      std::to_string(s.n), fmt(s.mean), fmt(s.std), z, p});
  }
  return t;
}

inline CsvTable by_frozen(std::span<const BatterySummary> in, std::string_view figure, std::string_view metric,
                          const ReportOptions& o) {
  require(!in.empty(), figure, "at least one pure battery");
  CsvTable t;
  t.columns = {"battery", "algorithms", "mode", "frozen_kind", "frozen_count", "n",
               "mean_" + std::string(metric == "dg" ? "dg" : "error"), "std_" + std::string(metric == "dg" ? "dg" : "error")};
  for (const auto& b : in) {
    require(b.config.policy.kind == PolicyScheme::Kind::Pure, figure, "pure batteries only");
    const auto v = metric_values(b.rows, metric, o.counting, o.dg);
    const auto s = summarize(v);
    t.rows.push_back({b.config.name, b.rows.front().algorithms, mode_of(b), b.rows.front().frozen_kind,
                      std::to_string(b.config.frozen_count()), std::to_string(s.n), fmt(s.mean), fmt(s.std)});
  }
  return t;
}

/// Blue: mean Sortedness of the chimera. Pink: mean aggregation of the
/// pseudo-chimera control. Red: mean aggregation of the chimera.
inline CsvTable fig8(std::span<const BatterySummary> in) {
  const BatterySummary* chimera = nullptr;
  const BatterySummary* control = nullptr;
  for (const auto& b : in) {
    if (b.config.policy.kind == PolicyScheme::Kind::Chimera && !chimera) chimera = &b;
    if (b.config.policy.kind == PolicyScheme::Kind::PseudoChimera && !control) control = &b;
  }
  require(chimera && control, "fig8", "one chimera battery and one pseudo-chimera control battery");
  CsvTable t;
  t.columns = {"progress", "sortedness_blue", "control_aggregation_pink", "chimera_aggregation_red"};
  for (int g = 0; g < kProgressGridPoints; ++g) {
    const auto i = static_cast<std::size_t>(g);
    t.rows.push_back({fmt(g / 100.0), fmt(chimera->mean_sortedness[i]), fmt(control->mean_aggregation[i]),
                      fmt(chimera->mean_aggregation[i])});
  }
  return t;
}

inline CsvTable fig9(std::span<const BatterySummary> in) {
  require(!in.empty(), "fig9", "at least one opposed-direction chimera battery");
  CsvTable t;
  t.columns = {"battery", "algorithms", "progress", "mean_sortedness", "mean_aggregation"};
  for (const auto& b : in) {
    require(b.config.opposed(), "fig9", "opposed-direction chimera batteries only");
    for (int g = 0; g < kProgressGridPoints; ++g) {
      const auto i = static_cast<std::size_t>(g);
      t.rows.push_back({b.config.name, b.rows.front().algorithms, fmt(g / 100.0), fmt(b.mean_sortedness[i]),
                        fmt(b.mean_aggregation[i])});
    }
  }
  return t;
}

}  // namespace detail

inline CsvTable report(std::string_view figure, std::span<const BatterySummary> inputs, const ReportOptions& o = {}) {
  if (figure == "fig3") return detail::fig3(inputs);
  if (figure == "fig4") return detail::fig4(inputs, o);
  if (figure == "fig5") return detail::by_frozen(inputs, "fig5", "final_monotonicity_error", o);
  if (figure == "fig7") return detail::by_frozen(inputs, "fig7", "dg", o);
  if (figure == "fig8") return detail::fig8(inputs);
  if (figure == "fig9") return detail::fig9(inputs);
  throw ConfigError("unknown figure id '" + std::string(figure) + "' (expected fig3, fig4, fig5, fig7, fig8 or fig9)",
                    "figure");
}

}  // namespace cellsort
