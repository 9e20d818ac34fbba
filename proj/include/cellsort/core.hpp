// core.hpp: cells, arrays and the small vocabulary every other header shares.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cellsort {

/// Thrown for invalid experiment or array descriptions. `key()` names the
/// offending configuration key when one applies.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Algotype : std::uint8_t { Bubble, Insertion, Selection };
enum class Direction : std::uint8_t { Increasing, Decreasing };
enum class FrozenKind : std::uint8_t { Active, Movable, Immovable };
enum class Mode : std::uint8_t { CellView, Traditional };

using CellId = std::int32_t;
inline constexpr CellId kController = -1;

inline constexpr std::string_view to_string(Algotype a) {
  switch (a) {
    case Algotype::Bubble: return "bubble";
    case Algotype::Insertion: return "insertion";
    case Algotype::Selection: return "selection";
  }
  return "?";
}
inline constexpr std::string_view to_string(Direction d) {
  return d == Direction::Increasing ? "increasing" : "decreasing";
}
inline constexpr std::string_view to_string(FrozenKind f) {
  switch (f) {
    case FrozenKind::Active: return "active";
    case FrozenKind::Movable: return "movable";
    case FrozenKind::Immovable: return "immovable";
  }
  return "?";
}
inline constexpr std::string_view to_string(Mode m) {
  return m == Mode::CellView ? "cellview" : "traditional";
}

inline std::optional<Algotype> parse_algotype(std::string_view s) {
  if (s == "bubble") return Algotype::Bubble;
  if (s == "insertion") return Algotype::Insertion;
  if (s == "selection") return Algotype::Selection;
  return std::nullopt;
}
inline std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "increasing" || s == "inc") return Direction::Increasing;
  if (s == "decreasing" || s == "dec") return Direction::Decreasing;
  return std::nullopt;
}
inline std::optional<FrozenKind> parse_frozen_kind(std::string_view s) {
  if (s == "active") return FrozenKind::Active;
  if (s == "movable") return FrozenKind::Movable;
  if (s == "immovable") return FrozenKind::Immovable;
  return std::nullopt;
}
inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "cellview") return Mode::CellView;
  if (s == "traditional") return Mode::Traditional;
  return std::nullopt;
}

/// True when `a` must sit strictly before `b` in an array ordered by `d`.
inline constexpr bool precedes(Direction d, int a, int b) {
  return d == Direction::Increasing ? a < b : a > b;
}

/// One array element. Attributes are fixed for the life of a run; only the
/// cell's position changes. `label` is the type tag aggregation is measured
/// on: it equals the algotype's index for real chimeras and is an arbitrary
/// tag for pseudo-chimeras, whose labels all run the same algorithm.
struct Cell {
  int value = 0;
  Algotype algotype = Algotype::Bubble;
  Direction direction = Direction::Increasing;
  FrozenKind frozen = FrozenKind::Active;
  CellId id = 0;
  int label = 0;

  bool operator==(const Cell&) const = default;
};

/// Per-cell memory used by the cell-view policies, indexed by cell id.
/// `ideal_position` is the selection target; `seen_left`/`seen_right` are the
/// ids of the neighbours last inspected on each side (-1 when none).
struct CellPolicyState {
  int ideal_position = 0;
  CellId seen_left = -1;
  CellId seen_right = -1;

  bool operator==(const CellPolicyState&) const = default;
};

class CellArrayState {
 public:
  CellArrayState() = default;

  std::size_t size() const noexcept { return cells_.size(); }
  int length() const noexcept { return static_cast<int>(cells_.size()); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  const Cell& at(int position) const { return cells_.at(static_cast<std::size_t>(position)); }

  CellPolicyState& policy(CellId id) { return policy_.at(static_cast<std::size_t>(id)); }
  const CellPolicyState& policy(CellId id) const { return policy_.at(static_cast<std::size_t>(id)); }

  int round() const noexcept { return round_; }
  void set_round(int r) noexcept { round_ = r; }

  /// Exchanges the cells at two positions; cell ids travel with their cells.
  void swap_positions(int a, int b) {
    std::swap(cells_.at(static_cast<std::size_t>(a)), cells_.at(static_cast<std::size_t>(b)));
  }

  std::vector<int> values() const {
    std::vector<int> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back(c.value);
    return out;
  }
  std::vector<int> labels() const {
    std::vector<int> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back(c.label);
    return out;
  }
  std::vector<CellId> ids() const {
    std::vector<CellId> out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back(c.id);
    return out;
  }

  bool operator==(const CellArrayState&) const = default;

 private:
  friend CellArrayState make_array(std::span<const int>, std::span<const Algotype>,
                                   std::span<const Direction>,
                                   std::span<const std::pair<int, FrozenKind>>,
                                   std::span<const int>);
  std::vector<Cell> cells_;
  std::vector<CellPolicyState> policy_;
  int round_ = 0;
};

/// Builds a fresh array: ids 0..N-1 in initial order, round 0, selection
/// pointers at the start of each cell's scan (left end for increasing cells,
/// right end for decreasing ones). `algotypes` and `directions` may hold a
/// single element to apply it to every cell. `labels` defaults to the
/// algotype index.
inline CellArrayState make_array(std::span<const int> values, std::span<const Algotype> algotypes,
                                 std::span<const Direction> directions,
                                 std::span<const std::pair<int, FrozenKind>> frozen = {},
                                 std::span<const int> labels = {}) {
  const std::size_t n = values.size();
  if (n == 0) throw ConfigError("array must contain at least one cell", "n");
  auto broadcast_ok = [n](std::size_t k) { return k == 1 || k == n; };
  if (!broadcast_ok(algotypes.size()))
    throw ConfigError("algotype assignment must have 1 or N entries", "policy");
  if (!broadcast_ok(directions.size()))
    throw ConfigError("direction assignment must have 1 or N entries", "policy");
  if (!labels.empty() && labels.size() != n)
    throw ConfigError("label assignment must have N entries", "policy");

  CellArrayState state;
  state.cells_.resize(n);
  state.policy_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Cell& c = state.cells_[i];
    c.value = values[i];
    c.algotype = algotypes[algotypes.size() == 1 ? 0 : i];
    c.direction = directions[directions.size() == 1 ? 0 : i];
    c.id = static_cast<CellId>(i);
    c.label = labels.empty() ? static_cast<int>(c.algotype) : labels[i];
    state.policy_[i].ideal_position =
        c.direction == Direction::Increasing ? 0 : static_cast<int>(n) - 1;
  }
  for (const auto& [index, kind] : frozen) {
    if (index < 0 || static_cast<std::size_t>(index) >= n)
      throw ConfigError("frozen index " + std::to_string(index) + " out of range for N=" +
                            std::to_string(n),
                        "frozen.placement");
    state.cells_[static_cast<std::size_t>(index)].frozen = kind;
  }
  return state;
}

inline CellArrayState make_array(std::span<const int> values, Algotype algotype,
                                 Direction direction = Direction::Increasing,
                                 std::span<const std::pair<int, FrozenKind>> frozen = {}) {
  const Algotype a[] = {algotype};
  const Direction d[] = {direction};
  return make_array(values, a, d, frozen);
}

/// Adjacent-pair ordering check. Strict rejects equal neighbours.
inline bool is_fully_sorted(std::span<const int> values, Direction direction, bool strict = true) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const int prev = values[i - 1];
    const int cur = values[i];
    const bool ok = strict ? precedes(direction, prev, cur) : !precedes(direction, cur, prev);
    if (!ok) return false;
  }
  return true;
}

inline bool is_fully_sorted(const CellArrayState& state, Direction direction, bool strict = true) {
  const auto v = state.values();
  return is_fully_sorted(v, direction, strict);
}

}  // namespace cellsort
