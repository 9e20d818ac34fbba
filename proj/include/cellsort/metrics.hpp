// metrics.hpp: Sortedness, monotonicity error, aggregation, delayed
// gratification and step totals.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cellsort/core.hpp"
#include "cellsort/outcome.hpp"

namespace cellsort {

/// Fraction of positions that follow the order: index 0 always counts, every
/// other index counts when it is ordered after its left neighbour (strictly,
/// unless `strict` is false).
inline double sortedness(std::span<const int> values, Direction direction, bool strict = true) {
  if (values.empty()) return 0.0;
  std::size_t ordered = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool ok = strict ? precedes(direction, values[i - 1], values[i])
                           : !precedes(direction, values[i], values[i - 1]);
    ordered += ok ? 1 : 0;
  }
  return static_cast<double>(ordered) / static_cast<double>(values.size());
}

inline double sortedness(const CellArrayState& state, Direction direction, bool strict = true) {
  const auto v = state.values();
  return sortedness(v, direction, strict);
}

/// Adjacent pairs that break the order. Equal neighbours are not violations.
inline int monotonicity_error(std::span<const int> values, Direction direction) {
  int errors = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    errors += precedes(direction, values[i], values[i - 1]) ? 1 : 0;
  return errors;
}

inline int monotonicity_error(const CellArrayState& state, Direction direction) {
  const auto v = state.values();
  return monotonicity_error(v, direction);
}

/// Share of the N-1 adjacent pairs whose cells carry the same label.
inline double aggregation_value(std::span<const int> labels) {
  if (labels.size() < 2) throw ConfigError("aggregation needs at least two cells", "n");
  std::size_t same = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) same += labels[i] == labels[i - 1] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(labels.size() - 1);
}

inline double aggregation_value(const CellArrayState& state) {
  const auto l = state.labels();
  return aggregation_value(l);
}

// ---------------------------------------------------------------------------
// Delayed gratification

/// One decline-then-recovery episode of a Sortedness trajectory.
/// `drop` is peak minus valley, `rise` is the following peak minus valley.
struct DGEvent {
  double drop = 0.0;
  double rise = 0.0;
};

enum class DgFormula : std::uint8_t { Methods, Fig6D };
enum class DgAggregate : std::uint8_t { Mean, Sum };

inline std::optional<DgFormula> parse_dg_formula(std::string_view s) {
  if (s == "methods") return DgFormula::Methods;
  if (s == "fig6d") return DgFormula::Fig6D;
  return std::nullopt;
}
inline constexpr std::string_view to_string(DgFormula f) {
  return f == DgFormula::Methods ? "methods" : "fig6d";
}
inline std::optional<DgAggregate> parse_dg_aggregate(std::string_view s) {
  if (s == "mean") return DgAggregate::Mean;
  if (s == "sum") return DgAggregate::Sum;
  return std::nullopt;
}
inline constexpr std::string_view to_string(DgAggregate a) {
  return a == DgAggregate::Mean ? "mean" : "sum";
}

/// Splits a trajectory into peak -> valley -> next-peak episodes. Flat
/// stretches are neither rise nor decline. A decline that never recovers
/// yields an event with rise 0.
inline std::vector<DGEvent> segment_dg_events(std::span<const double> trajectory) {
  std::vector<double> t;
  t.reserve(trajectory.size());
  for (double x : trajectory)
    if (t.empty() || x != t.back()) t.push_back(x);

  std::vector<DGEvent> events;
  std::size_t i = 0;
  while (i + 1 < t.size()) {
    if (t[i + 1] >= t[i]) {
      ++i;
      continue;
    }
    const double peak = t[i];
    while (i + 1 < t.size() && t[i + 1] < t[i]) ++i;
    const double valley = t[i];
    while (i + 1 < t.size() && t[i + 1] > t[i]) ++i;
    events.push_back({peak - valley, t[i] - valley});
  }
  return events;
}

/// Rise before the first decline; together with the events this telescopes
/// to final minus initial Sortedness.
inline double initial_rise(std::span<const double> trajectory) {
  if (trajectory.empty()) return 0.0;
  double hi = trajectory.front();
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (trajectory[i] < trajectory[i - 1]) break;
    hi = trajectory[i];
  }
  return hi - trajectory.front();
}

/// Methods: (x - y) / y, evaluated as x/y - 1 so it differs from Fig6D by
/// exactly one in floating point too.
inline double dg_score(const DGEvent& e, DgFormula formula) {
  const double ratio = e.rise / e.drop;
  return formula == DgFormula::Methods ? ratio - 1.0 : ratio;
}

/// Run-level delayed gratification; 0 when the trajectory never declines.
inline double delayed_gratification(std::span<const DGEvent> events,
                                    DgFormula formula = DgFormula::Methods,
                                    DgAggregate aggregate = DgAggregate::Mean) {
  if (events.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : events) total += dg_score(e, formula);
  return aggregate == DgAggregate::Mean ? total / static_cast<double>(events.size()) : total;
}

// ---------------------------------------------------------------------------
// Step totals

enum class Counting : std::uint8_t { SwapsOnly, SwapsPlusComparisons };

inline std::optional<Counting> parse_counting(std::string_view s) {
  if (s == "swaps") return Counting::SwapsOnly;
  if (s == "all") return Counting::SwapsPlusComparisons;
  return std::nullopt;
}
inline constexpr std::string_view to_string(Counting c) {
  return c == Counting::SwapsOnly ? "swaps" : "all";
}

inline std::uint64_t step_totals(const RunOutcome& outcome, Counting counting) {
  return counting == Counting::SwapsOnly ? outcome.total_swaps
                                         : outcome.total_swaps + outcome.total_comparisons;
}

}  // namespace cellsort
