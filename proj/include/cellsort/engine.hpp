// engine.hpp: deterministic round-based execution.
//
// Each round draws a seeded permutation of positions and activates the cell
// found at each position in turn, against the latest state; a proposed swap
// is applied on the spot. A run ends after `quiescence_window` consecutive
// quiet rounds, or when `max_activations` activations have inspected
// something. A round is quiet when no swap was applied and no cell inspected
// anything: a selection cell still walking its ideal position toward itself
// keeps the run alive even though it has not swapped for a while.
#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cellsort/algorithms.hpp"
#include "cellsort/core.hpp"
#include "cellsort/outcome.hpp"
#include "cellsort/probe.hpp"
#include "cellsort/rng.hpp"
#include "cellsort/run_context.hpp"

namespace cellsort {

enum class ActivationOrder : std::uint8_t { ShuffledPerRound, FixedIndexOrder };

struct SchedulerConfig {
  std::uint64_t seed = 0;
  int quiescence_window = 3;
  /// Upper bound on activations that inspect anything; 0 means 10*N*N.
  std::uint64_t max_activations = 0;
  ActivationOrder activation_order = ActivationOrder::ShuffledPerRound;

  std::uint64_t activation_cap(std::size_t n) const {
    return max_activations ? max_activations : 10 * static_cast<std::uint64_t>(n) * n;
  }
};

struct PolicySpec {
  Mode mode = Mode::CellView;
  /// Controller algorithm and direction; only read in Traditional mode.
  Algotype algorithm = Algotype::Bubble;
  Direction direction = Direction::Increasing;
};

/// Direction the run's metrics are measured in: the common direction when
/// every cell agrees, increasing otherwise.
inline Direction reference_direction(const CellArrayState& state, const PolicySpec& policy) {
  if (policy.mode == Mode::Traditional) return policy.direction;
  const auto cells = state.cells();
  if (cells.empty()) return Direction::Increasing;
  for (const auto& c : cells)
    if (c.direction != cells.front().direction) return Direction::Increasing;
  return cells.front().direction;
}

inline TraceHeader make_header(const CellArrayState& state, const PolicySpec& policy,
                               std::uint64_t seed, std::string digest, Direction reference) {
  TraceHeader h;
  h.digest = std::move(digest);
  h.seed = seed;
  h.n = state.length();
  h.mode = policy.mode;
  h.controller = policy.algorithm;
  h.controller_direction = policy.direction;
  h.reference_direction = reference;
  for (const auto& c : state.cells()) {
    h.values.push_back(c.value);
    h.algotypes.push_back(c.algotype);
    h.labels.push_back(c.label);
    h.directions.push_back(c.direction);
    h.frozen.push_back(c.frozen);
  }
  return h;
}

/// Gives the cell at `position` its turn. Frozen cells never act.
inline StepResult activate_cell(RunContext& ctx, int position) {
  if (ctx.state().at(position).frozen != FrozenKind::Active) return {};
  return cell_view_step(ctx, position);
}

inline RunOutcome run(CellArrayState state, const PolicySpec& policy,
                      const SchedulerConfig& scheduler, Probe& probe, std::string digest = {}) {
  const Direction reference = reference_direction(state, policy);
  state.set_round(0);
  probe.record(make_header(state, policy, scheduler.seed, std::move(digest), reference));
  RunContext ctx(state, probe, reference);
  ctx.snapshot(SnapshotTrigger::Initial);

  RunOutcome out;
  bool capped = false;
  if (policy.mode == Mode::Traditional) {
    out.rounds = run_traditional(ctx, policy.algorithm, policy.direction);
  } else {
    Rng rng(scheduler.seed);
    const auto cap = scheduler.activation_cap(state.size());
    std::vector<int> order(state.size());
    int quiet = 0;
    int round = 0;
    while (!capped) {
      state.set_round(++round);
      std::iota(order.begin(), order.end(), 0);
      if (scheduler.activation_order == ActivationOrder::ShuffledPerRound)
        rng.shuffle(std::span<int>(order));
      const auto swaps_before = ctx.swaps();
      bool inspected = false;
      for (int position : order) {
        if (!activate_cell(ctx, position).inspected) continue;
        inspected = true;
        if (++out.activations >= cap) {
          capped = true;
          break;
        }
      }
      ctx.snapshot(SnapshotTrigger::Round);
      quiet = ctx.swaps() == swaps_before && !inspected ? quiet + 1 : 0;
      if (quiet >= scheduler.quiescence_window) break;
    }
    out.rounds = round;
  }

  if (capped) out.terminated_by = TerminatedBy::ActivationCap;
  else if (is_fully_sorted(state, reference, false)) out.terminated_by = TerminatedBy::FullySorted;
  else out.terminated_by = TerminatedBy::Quiescent;

  out.total_swaps = ctx.swaps();
  out.total_comparisons = ctx.comparisons();
  out.total_denied = ctx.denied();

  TraceFooter f;
  f.swaps = out.total_swaps;
  f.comparisons = out.total_comparisons;
  f.denied = out.total_denied;
  f.activations = out.activations;
  f.rounds = out.rounds;
  f.terminated_by = out.terminated_by;
  f.final_values = state.values();
  f.final_ids = state.ids();
  probe.record(f);

  out.final_state = std::move(state);
  return out;
}

}  // namespace cellsort
