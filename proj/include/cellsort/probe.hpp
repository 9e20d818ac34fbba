// probe.hpp: run recorder and the line-oriented trace format.
//
// A trace is UTF-8 text, one record per line, tab-separated, first field the
// record tag. Field order is fixed; see docs/trace-format.md.
//
//   HEADER  version digest seed n mode controller controller_dir reference_dir
//           values algotypes labels directions frozen
//   EVENT   round kind actor index_a index_b value_a value_b algotype_a algotype_b
//   SNAP    round event_index trigger sortedness monotonicity_error aggregation
//   FOOTER  swaps comparisons denied activations rounds terminated_by
//           final_values final_ids
#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cellsort/core.hpp"
#include "cellsort/outcome.hpp"

namespace cellsort {

inline constexpr std::string_view kTraceFormatVersion = "cellsort-trace/1";

enum class EventKind : std::uint8_t { Compare, Swap, SwapDenied };
enum class SnapshotTrigger : std::uint8_t { Initial, Swap, Round };

struct TraceHeader {
  std::string format_version{kTraceFormatVersion};
  std::string digest;
  std::uint64_t seed = 0;
  int n = 0;
  Mode mode = Mode::CellView;
  Algotype controller = Algotype::Bubble;
  Direction controller_direction = Direction::Increasing;
  Direction reference_direction = Direction::Increasing;
  std::vector<int> values;
  std::vector<Algotype> algotypes;
  std::vector<int> labels;
  std::vector<Direction> directions;
  std::vector<FrozenKind> frozen;

  bool operator==(const TraceHeader&) const = default;
};

struct TraceEvent {
  int round = 0;
  EventKind kind = EventKind::Compare;
  CellId actor = kController;
  int index_a = 0;
  int index_b = 0;
  int value_a = 0;
  int value_b = 0;
  Algotype algotype_a = Algotype::Bubble;
  Algotype algotype_b = Algotype::Bubble;

  bool operator==(const TraceEvent&) const = default;
};

struct TraceSnapshot {
  int round = 0;
  std::uint64_t event_index = 0;
  SnapshotTrigger trigger = SnapshotTrigger::Swap;
  double sortedness = 0.0;
  int monotonicity_error = 0;
  double aggregation = 0.0;

  bool operator==(const TraceSnapshot&) const = default;
};

struct TraceFooter {
  std::uint64_t swaps = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t denied = 0;
  std::uint64_t activations = 0;
  int rounds = 0;
  TerminatedBy terminated_by = TerminatedBy::Quiescent;
  std::vector<int> final_values;
  std::vector<CellId> final_ids;

  bool operator==(const TraceFooter&) const = default;
};

using TraceRecord = std::variant<TraceHeader, TraceEvent, TraceSnapshot, TraceFooter>;

/// Misuse of the probe (records out of order).
class ProbeUsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or unreadable trace input, or a failed trace write.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Encoding

namespace detail {

inline char algotype_code(Algotype a) {
  switch (a) {
    case Algotype::Bubble: return 'b';
    case Algotype::Insertion: return 'i';
    case Algotype::Selection: return 's';
  }
  return '?';
}
inline std::optional<Algotype> algotype_from_code(char c) {
  switch (c) {
    case 'b': return Algotype::Bubble;
    case 'i': return Algotype::Insertion;
    case 's': return Algotype::Selection;
    default: return std::nullopt;
  }
}
inline char direction_code(Direction d) { return d == Direction::Increasing ? '+' : '-'; }
inline std::optional<Direction> direction_from_code(char c) {
  if (c == '+') return Direction::Increasing;
  if (c == '-') return Direction::Decreasing;
  return std::nullopt;
}
inline char frozen_code(FrozenKind f) {
  switch (f) {
    case FrozenKind::Active: return 'a';
    case FrozenKind::Movable: return 'm';
    case FrozenKind::Immovable: return 'x';
  }
  return '?';
}
inline std::optional<FrozenKind> frozen_from_code(char c) {
  switch (c) {
    case 'a': return FrozenKind::Active;
    case 'm': return FrozenKind::Movable;
    case 'x': return FrozenKind::Immovable;
    default: return std::nullopt;
  }
}
inline std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Compare: return "compare";
    case EventKind::Swap: return "swap";
    case EventKind::SwapDenied: return "denied";
  }
  return "?";
}
inline std::string_view trigger_name(SnapshotTrigger t) {
  switch (t) {
    case SnapshotTrigger::Initial: return "initial";
    case SnapshotTrigger::Swap: return "swap";
    case SnapshotTrigger::Round: return "round";
  }
  return "?";
}

inline void put_double(std::string& out, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

template <class T, class F>
void put_list(std::string& out, const std::vector<T>& items, F&& encode) {
  if (items.empty()) {
    out += '.';
    return;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    encode(out, items[i]);
  }
}

}  // namespace detail

inline std::string format_record(const TraceRecord& record) {
  using namespace detail;
  std::string out;
  auto tab = [&out] { out += '\t'; };
  auto put_int = [](std::string& o, auto v) { o += std::to_string(v); };
  auto put_code = [](auto code) {
    return [code](std::string& o, auto v) { o += code(v); };
  };
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TraceHeader>) {
          out += "HEADER\t";
          out += r.format_version;
          tab();
          out += r.digest.empty() ? std::string(".") : r.digest;
          tab();
          out += std::to_string(r.seed);
          tab();
          out += std::to_string(r.n);
          tab();
          out += to_string(r.mode);
          tab();
          out += to_string(r.controller);
          tab();
          out += direction_code(r.controller_direction);
          tab();
          out += direction_code(r.reference_direction);
          tab();
          put_list(out, r.values, put_int);
          tab();
          put_list(out, r.algotypes, put_code(algotype_code));
          tab();
          put_list(out, r.labels, put_int);
          tab();
          put_list(out, r.directions, put_code(direction_code));
          tab();
          put_list(out, r.frozen, put_code(frozen_code));
        } else if constexpr (std::is_same_v<R, TraceEvent>) {
          out += "EVENT\t";
          out += std::to_string(r.round);
          tab();
          out += event_kind_name(r.kind);
          tab();
          out += std::to_string(r.actor);
          tab();
          out += std::to_string(r.index_a);
          tab();
          out += std::to_string(r.index_b);
          tab();
          out += std::to_string(r.value_a);
          tab();
          out += std::to_string(r.value_b);
          tab();
          out += algotype_code(r.algotype_a);
          tab();
          out += algotype_code(r.algotype_b);
        } else if constexpr (std::is_same_v<R, TraceSnapshot>) {
          out += "SNAP\t";
          out += std::to_string(r.round);
          tab();
          out += std::to_string(r.event_index);
          tab();
          out += trigger_name(r.trigger);
          tab();
          put_double(out, r.sortedness);
          tab();
          out += std::to_string(r.monotonicity_error);
          tab();
          put_double(out, r.aggregation);
        } else {
          out += "FOOTER\t";
          out += std::to_string(r.swaps);
          tab();
          out += std::to_string(r.comparisons);
          tab();
          out += std::to_string(r.denied);
          tab();
          out += std::to_string(r.activations);
          tab();
          out += std::to_string(r.rounds);
          tab();
          out += to_string(r.terminated_by);
          tab();
          put_list(out, r.final_values, put_int);
          tab();
          put_list(out, r.final_ids, put_int);
        }
      },
      record);
  return out;
}

// ---------------------------------------------------------------------------
// Decoding

namespace detail {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no, std::string_view source)
      : line_no_(line_no), source_(source) {
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields_.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
  }

  std::size_t size() const { return fields_.size(); }
  std::string_view tag() const { return fields_.front(); }

  void expect_fields(std::size_t n) const {
    if (fields_.size() != n)
      fail("expected " + std::to_string(n) + " fields, found " + std::to_string(fields_.size()));
  }

  std::string_view str(std::size_t i) const { return fields_.at(i); }

  template <class T>
  T integer(std::size_t i) const {
    return parse_int<T>(fields_.at(i), i);
  }

  double real(std::size_t i) const {
    const auto f = fields_.at(i);
    double v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size()) fail("bad number in field " + std::to_string(i));
    return v;
  }

  template <class T>
  std::vector<T> int_list(std::size_t i) const {
    std::vector<T> out;
    const auto f = fields_.at(i);
    if (f == ".") return out;
    std::size_t start = 0;
    while (start <= f.size()) {
      const auto comma = f.find(',', start);
      const auto item = f.substr(start, comma == std::string_view::npos ? comma : comma - start);
      out.push_back(parse_int<T>(item, i));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  template <class T, class F>
  std::vector<T> code_list(std::size_t i, F&& decode) const {
    std::vector<T> out;
    const auto f = fields_.at(i);
    if (f == ".") return out;
    for (std::size_t k = 0; k < f.size(); k += 2) {
      if (k + 1 < f.size() && f[k + 1] != ',') fail("bad list in field " + std::to_string(i));
      const auto v = decode(f[k]);
      if (!v) fail("bad code in field " + std::to_string(i));
      out.push_back(*v);
    }
    return out;
  }

  template <class F>
  auto code(std::size_t i, F&& decode) const {
    const auto f = fields_.at(i);
    if (f.size() != 1) fail("bad code in field " + std::to_string(i));
    const auto v = decode(f[0]);
    if (!v) fail("bad code in field " + std::to_string(i));
    return *v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw TraceError(std::string(source_) + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  template <class T>
  T parse_int(std::string_view f, std::size_t i) const {
    T v{};
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size() || f.empty())
      fail("bad integer in field " + std::to_string(i));
    return v;
  }

  std::vector<std::string_view> fields_;
  std::size_t line_no_;
  std::string_view source_;
};

}  // namespace detail

/// Parses one trace line. Throws TraceError naming `source` and `line_no`.
inline TraceRecord parse_record(std::string_view line, std::size_t line_no = 1,
                                std::string_view source = "<trace>") {
  using namespace detail;
  LineParser p(line, line_no, source);
  const auto tag = p.tag();
  if (tag == "HEADER") {
    p.expect_fields(14);
    TraceHeader h;
    h.format_version = std::string(p.str(1));
    if (h.format_version != kTraceFormatVersion)
      p.fail("unsupported trace format version '" + h.format_version + "' (expected " +
             std::string(kTraceFormatVersion) + ")");
    h.digest = p.str(2) == "." ? std::string() : std::string(p.str(2));
    h.seed = p.integer<std::uint64_t>(3);
    h.n = p.integer<int>(4);
    const auto mode = parse_mode(p.str(5));
    if (!mode) p.fail("bad mode");
    h.mode = *mode;
    const auto ctl = parse_algotype(p.str(6));
    if (!ctl) p.fail("bad controller algorithm");
    h.controller = *ctl;
    h.controller_direction = p.code(7, direction_from_code);
    h.reference_direction = p.code(8, direction_from_code);
    h.values = p.int_list<int>(9);
    h.algotypes = p.code_list<Algotype>(10, algotype_from_code);
    h.labels = p.int_list<int>(11);
    h.directions = p.code_list<Direction>(12, direction_from_code);
    h.frozen = p.code_list<FrozenKind>(13, frozen_from_code);
    const auto n = static_cast<std::size_t>(h.n);
    if (h.values.size() != n || h.algotypes.size() != n || h.labels.size() != n ||
        h.directions.size() != n || h.frozen.size() != n)
      p.fail("header cell lists do not match n");
    return h;
  }
  if (tag == "EVENT") {
    p.expect_fields(10);
    TraceEvent e;
    e.round = p.integer<int>(1);
    const auto kind = p.str(2);
    if (kind == "compare") e.kind = EventKind::Compare;
    else if (kind == "swap") e.kind = EventKind::Swap;
    else if (kind == "denied") e.kind = EventKind::SwapDenied;
    else p.fail("bad event kind '" + std::string(kind) + "'");
    e.actor = p.integer<CellId>(3);
    e.index_a = p.integer<int>(4);
    e.index_b = p.integer<int>(5);
    e.value_a = p.integer<int>(6);
    e.value_b = p.integer<int>(7);
    e.algotype_a = p.code(8, algotype_from_code);
    e.algotype_b = p.code(9, algotype_from_code);
    return e;
  }
  if (tag == "SNAP") {
    p.expect_fields(7);
    TraceSnapshot s;
    s.round = p.integer<int>(1);
    s.event_index = p.integer<std::uint64_t>(2);
    const auto trig = p.str(3);
    if (trig == "initial") s.trigger = SnapshotTrigger::Initial;
    else if (trig == "swap") s.trigger = SnapshotTrigger::Swap;
    else if (trig == "round") s.trigger = SnapshotTrigger::Round;
    else p.fail("bad snapshot trigger '" + std::string(trig) + "'");
    s.sortedness = p.real(4);
    s.monotonicity_error = p.integer<int>(5);
    s.aggregation = p.real(6);
    return s;
  }
  if (tag == "FOOTER") {
    p.expect_fields(9);
    TraceFooter f;
    f.swaps = p.integer<std::uint64_t>(1);
    f.comparisons = p.integer<std::uint64_t>(2);
    f.denied = p.integer<std::uint64_t>(3);
    f.activations = p.integer<std::uint64_t>(4);
    f.rounds = p.integer<int>(5);
    const auto t = parse_terminated_by(p.str(6));
    if (!t) p.fail("bad termination reason");
    f.terminated_by = *t;
    f.final_values = p.int_list<int>(7);
    f.final_ids = p.int_list<CellId>(8);
    return f;
  }
  p.fail("unknown record tag '" + std::string(tag) + "'");
}

/// Reads a complete trace: exactly one HEADER first and one FOOTER last.
inline std::vector<TraceRecord> parse_trace(std::istream& in, std::string_view source = "<trace>") {
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool footer_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (footer_seen)
      throw TraceError(std::string(source) + ":" + std::to_string(line_no) +
                       ": record after FOOTER");
    auto rec = parse_record(line, line_no, source);
    const bool is_header = std::holds_alternative<TraceHeader>(rec);
    if (records.empty() != is_header)
      throw TraceError(std::string(source) + ":" + std::to_string(line_no) +
                       (is_header ? ": duplicate HEADER" : ": first record must be HEADER"));
    footer_seen = std::holds_alternative<TraceFooter>(rec);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw TraceError(std::string(source) + ": empty trace (missing HEADER)");
  if (!footer_seen)
    throw TraceError(std::string(source) + ": trace ends without FOOTER (truncated after line " +
                     std::to_string(line_no) + ")");
  return records;
}

inline std::vector<TraceRecord> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace " + path.string());
  return parse_trace(in, path.string());
}

inline void save_trace(const std::filesystem::path& path, std::span<const TraceRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot create trace " + path.string());
  for (const auto& r : records) out << format_record(r) << '\n';
  if (!out) throw TraceError("write failed for trace " + path.string());
}

// ---------------------------------------------------------------------------
// Probe

/// Records one run. Enforces HEADER first, FOOTER last; optionally streams
/// each record to `out` and/or keeps them in memory. The Sortedness and
/// aggregation trajectories (initial snapshot plus one sample per applied
/// swap) are always collected.
class Probe {
 public:
  Probe() = default;
  explicit Probe(std::ostream* out, bool keep_records = false)
      : out_(out), keep_(keep_records) {}

  static Probe in_memory() { return Probe(nullptr, true); }

  void record(const TraceRecord& r) {
    const bool is_header = std::holds_alternative<TraceHeader>(r);
    if (stage_ == Stage::Closed) throw ProbeUsageError("probe already received FOOTER");
    if (stage_ == Stage::Empty && !is_header)
      throw ProbeUsageError("first record must be HEADER");
    if (stage_ == Stage::Open && is_header) throw ProbeUsageError("HEADER recorded twice");

    if (is_header) {
      stage_ = Stage::Open;
    } else if (const auto* e = std::get_if<TraceEvent>(&r)) {
      ++events_;
      (void)e;
    } else if (const auto* s = std::get_if<TraceSnapshot>(&r)) {
      if (s->trigger != SnapshotTrigger::Round) {
        sortedness_.push_back(s->sortedness);
        aggregation_.push_back(s->aggregation);
      } else {
        round_sortedness_.push_back(s->sortedness);
      }
    } else {
      stage_ = Stage::Closed;
    }

    if (out_) {
      *out_ << format_record(r) << '\n';
      if (!*out_) throw TraceError("trace write failed");
    }
    if (keep_) records_.push_back(r);
  }

  bool finished() const noexcept { return stage_ == Stage::Closed; }
  std::uint64_t event_count() const noexcept { return events_; }
  std::span<const TraceRecord> records() const noexcept { return records_; }
  const std::vector<double>& sortedness_trajectory() const noexcept { return sortedness_; }
  const std::vector<double>& aggregation_trajectory() const noexcept { return aggregation_; }
  /// Sortedness at the end of each round (or controller pass).
  const std::vector<double>& round_sortedness() const noexcept { return round_sortedness_; }

 private:
  enum class Stage { Empty, Open, Closed };
  std::ostream* out_ = nullptr;
  bool keep_ = false;
  Stage stage_ = Stage::Empty;
  std::uint64_t events_ = 0;
  std::vector<TraceRecord> records_;
  std::vector<double> sortedness_;
  std::vector<double> aggregation_;
  std::vector<double> round_sortedness_;
};

}  // namespace cellsort
