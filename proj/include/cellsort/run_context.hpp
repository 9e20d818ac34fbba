// run_context.hpp: shared bookkeeping for one run: event emission, swap
// gating, counters and metric snapshots.
#pragma once

#include <cstdint>

#include "cellsort/core.hpp"
#include "cellsort/metrics.hpp"
#include "cellsort/probe.hpp"

namespace cellsort {

enum class SwapResult : std::uint8_t { Applied, DeniedImmovable, DeniedInitiatorFrozen };

/// Fault gate for exchanging the cells at `initiator` and `passive`.
/// The initiator is the cell that acts (cell-view) or the element being
/// carried (traditional). Frozen cells never initiate; immovable cells are
/// never moved; movable frozen cells may be the passive party.
inline SwapResult attempt_swap(CellArrayState& state, int initiator, int passive) {
  const Cell& a = state.at(initiator);
  const Cell& b = state.at(passive);
  if (a.frozen == FrozenKind::Immovable || b.frozen == FrozenKind::Immovable)
    return SwapResult::DeniedImmovable;
  if (a.frozen == FrozenKind::Movable) return SwapResult::DeniedInitiatorFrozen;
  state.swap_positions(initiator, passive);
  return SwapResult::Applied;
}

class RunContext {
 public:
  RunContext(CellArrayState& state, Probe& probe, Direction reference)
      : state_(state), probe_(probe), reference_(reference) {}

  CellArrayState& state() { return state_; }
  const CellArrayState& state() const { return state_; }
  Direction reference() const { return reference_; }

  std::uint64_t swaps() const { return swaps_; }
  std::uint64_t comparisons() const { return comparisons_; }
  std::uint64_t denied() const { return denied_; }

  /// One value inspection that did not end in an applied swap.
  void compare(CellId actor, int a, int b) {
    ++comparisons_;
    emit(EventKind::Compare, actor, a, b);
  }

  /// Proposes exchanging `initiator` with `passive`. An applied swap is one
  /// Swap step. A denial is a SwapDenied step, preceded by a Compare when the
  /// proposal came from an inspection the caller has not already counted.
  SwapResult propose(CellId actor, int initiator, int passive, bool inspection_counted) {
    TraceEvent e = make_event(EventKind::Swap, actor, initiator, passive);
    const auto r = attempt_swap(state_, initiator, passive);
    if (r == SwapResult::Applied) {
      ++swaps_;
      probe_.record(e);
      snapshot(SnapshotTrigger::Swap);
      return r;
    }
    if (!inspection_counted) compare(actor, initiator, passive);
    ++denied_;
    e.kind = EventKind::SwapDenied;
    probe_.record(e);
    return r;
  }

  void snapshot(SnapshotTrigger trigger) {
    const auto values = state_.values();
    TraceSnapshot s;
    s.round = state_.round();
    s.event_index = probe_.event_count();
    s.trigger = trigger;
    s.sortedness = sortedness(values, reference_);
    s.monotonicity_error = monotonicity_error(values, reference_);
    s.aggregation = state_.size() >= 2 ? aggregation_value(state_) : 0.0;
    probe_.record(s);
  }

 private:
  void emit(EventKind kind, CellId actor, int a, int b) { probe_.record(make_event(kind, actor, a, b)); }

  TraceEvent make_event(EventKind kind, CellId actor, int a, int b) const {
    const Cell& ca = state_.at(a);
    const Cell& cb = state_.at(b);
    TraceEvent e;
    e.round = state_.round();
    e.kind = kind;
    e.actor = actor;
    e.index_a = a;
    e.index_b = b;
    e.value_a = ca.value;
    e.value_b = cb.value;
    e.algotype_a = ca.algotype;
    e.algotype_b = cb.algotype;
    return e;
  }

  CellArrayState& state_;
  Probe& probe_;
  Direction reference_;
  std::uint64_t swaps_ = 0;
  std::uint64_t comparisons_ = 0;
  std::uint64_t denied_ = 0;
};

}  // namespace cellsort
