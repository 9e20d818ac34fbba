// config.hpp: experiment descriptions and their flat key = value file form.
//
// See docs/config-format.md for the schema. Unknown keys are errors; every
// ConfigError names the key at fault.
#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cellsort/core.hpp"
#include "cellsort/engine.hpp"
#include "cellsort/metrics.hpp"

namespace cellsort {

inline constexpr std::string_view kConfigFormatVersion = "cellsort-config/1";

struct ValueScheme {
  enum class Kind { DistinctPermutation, DuplicatedRange } kind = Kind::DistinctPermutation;
  int lo = 1;
  int hi = 10;
  int copies = 10;
};

struct MixEntry {
  Algotype algotype = Algotype::Bubble;
  Direction direction = Direction::Increasing;
  double proportion = 0.0;
};

struct PolicyScheme {
  enum class Kind { Pure, Chimera, PseudoChimera } kind = Kind::Pure;
  Mode mode = Mode::CellView;
  Algotype algorithm = Algotype::Bubble;
  Direction direction = Direction::Increasing;
  std::vector<MixEntry> mix;  // Chimera only
  int labels = 2;             // PseudoChimera only
};

struct FrozenConfig {
  enum class Placement { UniformRandom, ExplicitIndices };
  int count = 0;
  FrozenKind kind = FrozenKind::Movable;
  Placement placement = Placement::UniformRandom;
  std::vector<int> indices;
  bool rerandomize = true;
};

struct ExperimentConfig {
  std::string name = "experiment";
  int n = 100;
  int reps = 100;
  std::uint64_t seed = 1;
  ValueScheme values;
  PolicyScheme policy;
  FrozenConfig frozen;
  /// Rejection band on the initial (increasing) Sortedness; empty = none.
  std::optional<std::pair<double, double>> initial_band;
  Counting counting = Counting::SwapsOnly;
  DgFormula dg_formula = DgFormula::Methods;
  DgAggregate dg_aggregate = DgAggregate::Mean;
  SchedulerConfig scheduler;

  /// True when the mix has cells sorting in opposite directions.
  bool opposed() const {
    if (policy.kind != PolicyScheme::Kind::Chimera) return false;
    for (const auto& e : policy.mix)
      if (e.direction != policy.mix.front().direction) return true;
    return false;
  }
  int frozen_count() const {
    return frozen.placement == FrozenConfig::Placement::ExplicitIndices
               ? static_cast<int>(frozen.indices.size())
               : frozen.count;
  }
};

// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? p : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
    throw ConfigError("invalid number '" + text + "' for " + key, key);
  return v;
}

inline bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key, key);
}

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T, class F>
T parse_enum(const std::string& text, const std::string& key, F&& parse) {
  const auto v = parse(text);
  if (!v) throw ConfigError("invalid value '" + text + "' for " + key, key);
  return *v;
}

}  // namespace detail

/// Checks cross-key constraints. Throws ConfigError naming the key at fault.
inline void validate(const ExperimentConfig& c) {
  if (c.n < 1) throw ConfigError("n must be positive", "n");
  if (c.reps < 1) throw ConfigError("reps must be positive", "reps");
  if (c.values.kind == ValueScheme::Kind::DuplicatedRange) {
    if (c.values.hi < c.values.lo) throw ConfigError("values.hi must be >= values.lo", "values.hi");
    if (c.values.copies < 1) throw ConfigError("values.copies must be positive", "values.copies");
    if ((c.values.hi - c.values.lo + 1) * c.values.copies != c.n)
      throw ConfigError("duplicated range must cover exactly n cells ((hi-lo+1)*copies == n)",
                        "values");
  }
  const auto& p = c.policy;
  if (p.mode == Mode::Traditional && p.kind != PolicyScheme::Kind::Pure)
    throw ConfigError("traditional mode only supports the pure policy scheme", "policy.mode");
  if (p.kind == PolicyScheme::Kind::Chimera) {
    if (p.mix.size() < 2) throw ConfigError("a chimera needs at least two mix entries", "policy.mix");
    double total = 0;
    for (const auto& e : p.mix) {
      if (e.proportion <= 0) throw ConfigError("mix proportions must be positive", "policy.mix");
      total += e.proportion;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mix proportions must sum to 1", "policy.mix");
  }
  if (p.kind == PolicyScheme::Kind::PseudoChimera && p.labels < 2)
    throw ConfigError("a pseudo-chimera needs at least two labels", "policy.labels");
  if (c.frozen.placement == FrozenConfig::Placement::ExplicitIndices) {
    std::vector<bool> seen(static_cast<std::size_t>(c.n), false);
    for (int i : c.frozen.indices) {
      if (i < 0 || i >= c.n)
        throw ConfigError("frozen index " + std::to_string(i) + " out of range for n=" +
                              std::to_string(c.n),
                          "frozen.placement");
      if (seen[static_cast<std::size_t>(i)])
        throw ConfigError("duplicate frozen index " + std::to_string(i), "frozen.placement");
      seen[static_cast<std::size_t>(i)] = true;
    }
  } else if (c.frozen.count < 0 || c.frozen.count > c.n) {
    throw ConfigError("frozen.count must be within [0, n]", "frozen.count");
  }
  if (c.frozen_count() > 0 && c.frozen.kind == FrozenKind::Active)
    throw ConfigError("frozen.kind must be movable or immovable", "frozen.kind");
  if (c.initial_band) {
    const auto [lo, hi] = *c.initial_band;
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
      throw ConfigError("initial.sortedness must be lo:hi within [0,1]", "initial.sortedness");
  }
  if (c.scheduler.quiescence_window < 1)
    throw ConfigError("scheduler.quiescence must be positive", "scheduler.quiescence");
}

inline ExperimentConfig parse_config(std::string_view text) {
  using namespace detail;
  std::map<std::string, std::string> kv;
  std::map<std::string, int> line_of;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value", "");
    const auto key = trim(std::string_view(t).substr(0, eq));
    const auto value = trim(std::string_view(t).substr(eq + 1));
    if (kv.count(key)) throw ConfigError("duplicate key " + key, key);
    kv[key] = value;
    line_of[key] = line_no;
  }

  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  const auto format = take("format");
  if (!format) throw ConfigError("missing format key (expected " + std::string(kConfigFormatVersion) + ")", "format");
  if (*format != kConfigFormatVersion)
    throw ConfigError("unsupported config format '" + *format + "'", "format");

  ExperimentConfig c;
  if (auto v = take("name")) c.name = *v;
  if (auto v = take("n")) c.n = parse_number<int>(*v, "n");
  if (auto v = take("reps")) c.reps = parse_number<int>(*v, "reps");
  if (auto v = take("seed")) c.seed = parse_number<std::uint64_t>(*v, "seed");

  if (auto v = take("values")) {
    if (*v == "distinct") c.values.kind = ValueScheme::Kind::DistinctPermutation;
    else if (*v == "duplicated") c.values.kind = ValueScheme::Kind::DuplicatedRange;
    else throw ConfigError("invalid value '" + *v + "' for values", "values");
  }
  if (auto v = take("values.lo")) c.values.lo = parse_number<int>(*v, "values.lo");
  if (auto v = take("values.hi")) c.values.hi = parse_number<int>(*v, "values.hi");
  if (auto v = take("values.copies")) c.values.copies = parse_number<int>(*v, "values.copies");

  if (auto v = take("policy")) {
    if (*v == "pure") c.policy.kind = PolicyScheme::Kind::Pure;
    else if (*v == "chimera") c.policy.kind = PolicyScheme::Kind::Chimera;
    else if (*v == "pseudo") c.policy.kind = PolicyScheme::Kind::PseudoChimera;
    else throw ConfigError("invalid value '" + *v + "' for policy", "policy");
  }
  if (auto v = take("policy.mode")) c.policy.mode = parse_enum<Mode>(*v, "policy.mode", parse_mode);
  if (auto v = take("policy.algorithm"))
    c.policy.algorithm = parse_enum<Algotype>(*v, "policy.algorithm", parse_algotype);
  if (auto v = take("policy.direction"))
    c.policy.direction = parse_enum<Direction>(*v, "policy.direction", parse_direction);
  if (auto v = take("policy.labels")) c.policy.labels = parse_number<int>(*v, "policy.labels");
  if (auto v = take("policy.mix")) {
    const auto entries = split(*v, ',');
    for (const auto& entry : entries) {
      const auto parts = split(entry, ':');
      if (parts.size() < 1 || parts.size() > 3)
        throw ConfigError("mix entries are algorithm[:direction[:proportion]]", "policy.mix");
      MixEntry e;
      e.algotype = parse_enum<Algotype>(parts[0], "policy.mix", parse_algotype);
      if (parts.size() > 1) e.direction = parse_enum<Direction>(parts[1], "policy.mix", parse_direction);
      e.proportion = parts.size() > 2 ? parse_number<double>(parts[2], "policy.mix") : -1.0;
      c.policy.mix.push_back(e);
    }
    const bool any_given = std::any_of(c.policy.mix.begin(), c.policy.mix.end(),
                                       [](const MixEntry& e) { return e.proportion >= 0; });
    const bool all_given = std::all_of(c.policy.mix.begin(), c.policy.mix.end(),
                                       [](const MixEntry& e) { return e.proportion >= 0; });
    if (any_given && !all_given)
      throw ConfigError("give a proportion for every mix entry or for none", "policy.mix");
    if (!any_given)
      for (auto& e : c.policy.mix) e.proportion = 1.0 / static_cast<double>(c.policy.mix.size());
  }

  if (auto v = take("frozen.count")) c.frozen.count = parse_number<int>(*v, "frozen.count");
  if (auto v = take("frozen.kind"))
    c.frozen.kind = parse_enum<FrozenKind>(*v, "frozen.kind", parse_frozen_kind);
  if (auto v = take("frozen.placement")) {
    if (*v == "random") {
      c.frozen.placement = FrozenConfig::Placement::UniformRandom;
    } else {
      c.frozen.placement = FrozenConfig::Placement::ExplicitIndices;
      for (const auto& idx : split(*v, ','))
        c.frozen.indices.push_back(parse_number<int>(idx, "frozen.placement"));
    }
  }
  if (auto v = take("frozen.rerandomize")) c.frozen.rerandomize = parse_bool(*v, "frozen.rerandomize");

  std::optional<std::string> band = take("initial.sortedness");
  if (band && *band != "auto" && *band != "none") {
    const auto parts = split(*band, ':');
    if (parts.size() != 2) throw ConfigError("initial.sortedness must be lo:hi", "initial.sortedness");
    c.initial_band = std::pair{parse_number<double>(parts[0], "initial.sortedness"),
                               parse_number<double>(parts[1], "initial.sortedness")};
  }

  if (auto v = take("counting")) c.counting = parse_enum<Counting>(*v, "counting", parse_counting);
  if (auto v = take("dg")) c.dg_formula = parse_enum<DgFormula>(*v, "dg", parse_dg_formula);
  if (auto v = take("dg.aggregate"))
    c.dg_aggregate = parse_enum<DgAggregate>(*v, "dg.aggregate", parse_dg_aggregate);
  if (auto v = take("scheduler.quiescence"))
    c.scheduler.quiescence_window = parse_number<int>(*v, "scheduler.quiescence");
  if (auto v = take("scheduler.max_activations"))
    c.scheduler.max_activations = parse_number<std::uint64_t>(*v, "scheduler.max_activations");
  if (auto v = take("scheduler.order")) {
    if (*v == "shuffled") c.scheduler.activation_order = ActivationOrder::ShuffledPerRound;
    else if (*v == "fixed") c.scheduler.activation_order = ActivationOrder::FixedIndexOrder;
    else throw ConfigError("invalid value '" + *v + "' for scheduler.order", "scheduler.order");
  }

  if (!kv.empty()) {
    const auto& key = kv.begin()->first;
    throw ConfigError("unknown key '" + key + "' on line " + std::to_string(line_of[key]), key);
  }
  // Opposed-direction mixes start near 50% Sortedness unless told otherwise.
  if (!band || *band == "auto")
    if (c.opposed()) c.initial_band = std::pair{0.45, 0.55};

  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Canonical text: every key, fixed order. parse_config(to_text(c)) == c.
inline std::string to_text(const ExperimentConfig& c) {
  using detail::format_double;
  std::ostringstream o;
  o << "format = " << kConfigFormatVersion << '\n';
  o << "name = " << c.name << '\n';
  o << "n = " << c.n << '\n';
  o << "reps = " << c.reps << '\n';
  o << "seed = " << c.seed << '\n';
  const bool dup = c.values.kind == ValueScheme::Kind::DuplicatedRange;
  o << "values = " << (dup ? "duplicated" : "distinct") << '\n';
  if (dup) {
    o << "values.lo = " << c.values.lo << '\n';
    o << "values.hi = " << c.values.hi << '\n';
    o << "values.copies = " << c.values.copies << '\n';
  }
  switch (c.policy.kind) {
    case PolicyScheme::Kind::Pure: o << "policy = pure\n"; break;
    case PolicyScheme::Kind::Chimera: o << "policy = chimera\n"; break;
    case PolicyScheme::Kind::PseudoChimera: o << "policy = pseudo\n"; break;
  }
  o << "policy.mode = " << to_string(c.policy.mode) << '\n';
  if (c.policy.kind == PolicyScheme::Kind::Chimera) {
    o << "policy.mix = ";
    for (std::size_t i = 0; i < c.policy.mix.size(); ++i) {
      const auto& e = c.policy.mix[i];
      o << (i ? ", " : "") << to_string(e.algotype) << ':' << to_string(e.direction) << ':'
        << format_double(e.proportion);
    }
    o << '\n';
  } else {
    o << "policy.algorithm = " << to_string(c.policy.algorithm) << '\n';
    o << "policy.direction = " << to_string(c.policy.direction) << '\n';
    if (c.policy.kind == PolicyScheme::Kind::PseudoChimera) o << "policy.labels = " << c.policy.labels << '\n';
  }
  o << "frozen.kind = " << to_string(c.frozen.kind) << '\n';
  if (c.frozen.placement == FrozenConfig::Placement::ExplicitIndices) {
    o << "frozen.placement = ";
    for (std::size_t i = 0; i < c.frozen.indices.size(); ++i) o << (i ? "," : "") << c.frozen.indices[i];
    o << '\n';
  } else {
    o << "frozen.count = " << c.frozen.count << '\n';
    o << "frozen.placement = random\n";
  }
  o << "frozen.rerandomize = " << (c.frozen.rerandomize ? "true" : "false") << '\n';
  if (c.initial_band)
    o << "initial.sortedness = " << format_double(c.initial_band->first) << ':'
      << format_double(c.initial_band->second) << '\n';
  else
    o << "initial.sortedness = none\n";
  o << "counting = " << to_string(c.counting) << '\n';
  o << "dg = " << to_string(c.dg_formula) << '\n';
  o << "dg.aggregate = " << to_string(c.dg_aggregate) << '\n';
  o << "scheduler.quiescence = " << c.scheduler.quiescence_window << '\n';
  o << "scheduler.max_activations = " << c.scheduler.max_activations << '\n';
  o << "scheduler.order = "
    << (c.scheduler.activation_order == ActivationOrder::ShuffledPerRound ? "shuffled" : "fixed") << '\n';
  return o.str();
}

/// FNV-1a 64 of the canonical text, as 16 hex digits.
inline std::string config_digest(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Short description used in summary rows, e.g. "cellview-bubble",
/// "bubble+selection", "pseudo-insertion".
inline std::string policy_label(const ExperimentConfig& c) {
  const auto& p = c.policy;
  switch (p.kind) {
    case PolicyScheme::Kind::Pure:
      return std::string(to_string(p.mode)) + "-" + std::string(to_string(p.algorithm));
    case PolicyScheme::Kind::PseudoChimera:
      return "pseudo-" + std::string(to_string(p.algorithm));
    case PolicyScheme::Kind::Chimera: {
      std::string s;
      for (std::size_t i = 0; i < p.mix.size(); ++i) {
        if (i) s += '+';
        s += to_string(p.mix[i].algotype);
        if (c.opposed()) s += p.mix[i].direction == Direction::Increasing ? "(inc)" : "(dec)";
      }
      return s;
    }
  }
  return "?";
}

}  // namespace cellsort
