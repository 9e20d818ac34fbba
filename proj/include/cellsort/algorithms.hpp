// algorithms.hpp: the three cell-view policies and the three top-down
// controllers.
//
// Cell-view sensing model: a cell only spends a comparison on a neighbour it
// has not already inspected from its current spot (values never change, so
// re-reading the same pair tells it nothing). An inspection that leads to a
// swap proposal is charged as that Swap; one that leads nowhere is a Compare.
// A denied proposal costs a Compare plus a SwapDenied.
#pragma once

#include <optional>

#include "cellsort/core.hpp"
#include "cellsort/run_context.hpp"

namespace cellsort {

struct StepResult {
  bool inspected = false;
  std::optional<SwapResult> swap;
};

/// Moves left when ordered before its left neighbour, otherwise right when
/// its right neighbour is ordered before it. Left is checked first.
inline StepResult bubble_cv_step(RunContext& ctx, int position) {
  auto& state = ctx.state();
  const Cell self = state.at(position);
  auto& memory = state.policy(self.id);
  StepResult out;

  if (position > 0) {
    const Cell& left = state.at(position - 1);
    if (memory.seen_left != left.id) {
      out.inspected = true;
      memory.seen_left = left.id;
      if (precedes(self.direction, self.value, left.value)) {
        out.swap = ctx.propose(self.id, position, position - 1, false);
        return out;
      }
      ctx.compare(self.id, position, position - 1);
    }
  }
  if (position + 1 < state.length()) {
    const Cell& right = state.at(position + 1);
    if (memory.seen_right != right.id) {
      out.inspected = true;
      memory.seen_right = right.id;
      if (precedes(self.direction, right.value, self.value)) {
        out.swap = ctx.propose(self.id, position, position + 1, false);
        return out;
      }
      ctx.compare(self.id, position, position + 1);
    }
  }
  return out;
}

/// True when positions [0, end) are ordered (ties allowed) for `direction`.
/// This is the insertion cell's view of everything to its left; it is not
/// charged as comparisons.
inline bool prefix_sorted(const CellArrayState& state, int end, Direction direction) {
  for (int i = 1; i < end; ++i)
    if (precedes(direction, state.at(i).value, state.at(i - 1).value)) return false;
  return true;
}

/// Moves left only while everything to its left is sorted and it is ordered
/// before its left neighbour.
inline StepResult insertion_cv_step(RunContext& ctx, int position) {
  StepResult out;
  if (position == 0) return out;
  auto& state = ctx.state();
  const Cell self = state.at(position);
  auto& memory = state.policy(self.id);
  const Cell& left = state.at(position - 1);
  if (memory.seen_left == left.id) return out;
  if (!prefix_sorted(state, position, self.direction)) return out;

  out.inspected = true;
  memory.seen_left = left.id;
  if (precedes(self.direction, self.value, left.value)) {
    out.swap = ctx.propose(self.id, position, position - 1, false);
    return out;
  }
  ctx.compare(self.id, position, position - 1);
  return out;
}

/// Swaps into its ideal position when it belongs before the occupant there;
/// otherwise (or when the swap is denied) the ideal position steps one place
/// toward the cell. A cell whose ideal position is its own spot rests. If the
/// cell has been pushed behind its ideal position by another policy, the ideal
/// position is pulled back to where the cell now sits.
inline StepResult selection_cv_step(RunContext& ctx, int position) {
  auto& state = ctx.state();
  const Cell self = state.at(position);
  auto& memory = state.policy(self.id);
  const int step = self.direction == Direction::Increasing ? 1 : -1;
  StepResult out;

  if ((memory.ideal_position - position) * step > 0) memory.ideal_position = position;
  if (memory.ideal_position == position) return out;

  const int target = memory.ideal_position;
  const Cell& occupant = state.at(target);
  out.inspected = true;
  // Scanning from the left the cell must precede the occupant; scanning from
  // the right it must follow it.
  const bool wants = step > 0 ? precedes(self.direction, self.value, occupant.value)
                              : precedes(self.direction, occupant.value, self.value);
  if (wants) {
    out.swap = ctx.propose(self.id, position, target, false);
    if (*out.swap != SwapResult::Applied) memory.ideal_position += step;
    return out;
  }
  ctx.compare(self.id, position, target);
  memory.ideal_position += step;
  return out;
}

inline StepResult cell_view_step(RunContext& ctx, int position) {
  switch (ctx.state().at(position).algotype) {
    case Algotype::Bubble: return bubble_cv_step(ctx, position);
    case Algotype::Insertion: return insertion_cv_step(ctx, position);
    case Algotype::Selection: return selection_cv_step(ctx, position);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Traditional controllers. Every comparison is a Compare step and every
// exchange a Swap step; insertion shifts are adjacent swaps. A failed swap
// (immovable party, or a frozen element being carried) abandons that carry
// and the controller moves on to its next scripted step.

/// Passes left to right, bubbling the larger element of each out-of-order
/// pair; the unsorted region shrinks by one per pass. Stops after a pass
/// with no applied swap. Returns the number of passes.
inline int traditional_bubble(RunContext& ctx, Direction direction) {
  auto& state = ctx.state();
  int end = state.length() - 1;
  int passes = 0;
  while (end > 0) {
    state.set_round(++passes);
    bool moved = false;
    for (int j = 0; j < end; ++j) {
      ctx.compare(kController, j, j + 1);
      if (precedes(direction, state.at(j + 1).value, state.at(j).value))
        moved |= ctx.propose(kController, j, j + 1, true) == SwapResult::Applied;
    }
    ctx.snapshot(SnapshotTrigger::Round);
    if (!moved) break;
    --end;
  }
  return passes;
}

/// Takes each element of the unsorted part in turn and swaps it leftward
/// until its left neighbour is not larger.
inline int traditional_insertion(RunContext& ctx, Direction direction) {
  auto& state = ctx.state();
  int passes = 0;
  for (int i = 1; i < state.length(); ++i) {
    state.set_round(++passes);
    for (int j = i; j > 0; --j) {
      ctx.compare(kController, j - 1, j);
      if (!precedes(direction, state.at(j).value, state.at(j - 1).value)) break;
      if (ctx.propose(kController, j, j - 1, true) != SwapResult::Applied) break;
    }
    ctx.snapshot(SnapshotTrigger::Round);
  }
  return passes;
}

/// Finds the extreme element of the unsorted part and swaps it onto the
/// boundary, which then advances by one.
inline int traditional_selection(RunContext& ctx, Direction direction) {
  auto& state = ctx.state();
  int passes = 0;
  for (int i = 0; i + 1 < state.length(); ++i) {
    state.set_round(++passes);
    int best = i;
    for (int k = i + 1; k < state.length(); ++k) {
      ctx.compare(kController, best, k);
      if (precedes(direction, state.at(k).value, state.at(best).value)) best = k;
    }
    if (best != i) ctx.propose(kController, best, i, true);
    ctx.snapshot(SnapshotTrigger::Round);
  }
  return passes;
}

inline int run_traditional(RunContext& ctx, Algotype algorithm, Direction direction) {
  switch (algorithm) {
    case Algotype::Bubble: return traditional_bubble(ctx, direction);
    case Algotype::Insertion: return traditional_insertion(ctx, direction);
    case Algotype::Selection: return traditional_selection(ctx, direction);
  }
  return 0;
}

}  // namespace cellsort
