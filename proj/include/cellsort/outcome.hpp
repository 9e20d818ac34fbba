// outcome.hpp: result of one run.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cellsort/core.hpp"

namespace cellsort {

enum class TerminatedBy : std::uint8_t { Quiescent, FullySorted, ActivationCap };

inline constexpr std::string_view to_string(TerminatedBy t) {
  switch (t) {
    case TerminatedBy::Quiescent: return "quiescent";
    case TerminatedBy::FullySorted: return "sorted";
    case TerminatedBy::ActivationCap: return "cap";
  }
  return "?";
}
inline std::optional<TerminatedBy> parse_terminated_by(std::string_view s) {
  if (s == "quiescent") return TerminatedBy::Quiescent;
  if (s == "sorted") return TerminatedBy::FullySorted;
  if (s == "cap") return TerminatedBy::ActivationCap;
  return std::nullopt;
}

/// Counters are exact event counts taken from the emitted trace.
struct RunOutcome {
  CellArrayState final_state;
  std::uint64_t total_swaps = 0;
  std::uint64_t total_comparisons = 0;
  std::uint64_t total_denied = 0;
  std::uint64_t activations = 0;
  int rounds = 0;
  TerminatedBy terminated_by = TerminatedBy::Quiescent;
};

}  // namespace cellsort
