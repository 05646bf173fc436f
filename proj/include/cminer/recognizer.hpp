// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cminer/casas.hpp"
#include "cminer/constructs.hpp"
#include "cminer/errors.hpp"
#include "cminer/locations.hpp"
#include "cminer/strings.hpp"
#include "cminer/timestamp.hpp"

namespace cminer {

struct EventSymbol {
  std::string location;
  SensorKind kind = SensorKind::Motion;
  std::string value;

  bool operator==(const EventSymbol&) const = default;
};

struct TimedSymbol {
  LogTimestamp timestamp;
  EventSymbol symbol;
};

struct SymbolizeOptions {
  std::set<SensorKind> exclude = {SensorKind::Temperature};
};

// Projects sensor events onto the (location, kind, value) alphabet, dropping
// excluded kinds. Locations are resolved only for emitted events.
inline std::vector<TimedSymbol> symbolize_stream(std::span<const SensorEvent> events,
                                                 const LocationMap& locations,
                                                 const SymbolizeOptions& options = {}) {
  std::vector<TimedSymbol> symbols;
  symbols.reserve(events.size());
  for (const auto& event : events) {
    if (options.exclude.count(event.kind)) continue;
    symbols.push_back(
        {event.timestamp, {locations.lookup(event.sensor_id), event.kind, event.value}});
  }
  return symbols;
}

// One any-of alternative inside a construct's predicate set. "*" (stored as an
// empty optional for kind) matches any field value; text compares fold case.
struct SymbolPredicate {
  std::string location;  // "*" = any
  std::optional<SensorKind> kind;
  std::string value;  // "*" = any

  bool matches(const EventSymbol& symbol) const {
    if (kind && *kind != symbol.kind) return false;
    if (location != "*" && strings::to_lower(location) != strings::to_lower(symbol.location)) {
      return false;
    }
    if (value != "*" && strings::to_lower(value) != strings::to_lower(symbol.value)) return false;
    return true;
  }
};

class UnmappedConstruct : public Error {
 public:
  explicit UnmappedConstruct(const std::string& name)
      : Error("no symbol predicates mapped for construct '" + name + "'") {}
};

class UnreviewedSet : public Error {
 public:
  explicit UnreviewedSet(const std::string& label)
      : Error("construct set for '" + label + "' has not been reviewed") {}
};

namespace detail {

inline std::optional<SensorKind> parse_kind_field(std::string_view field) {
  auto lowered = strings::to_lower(strings::trim(field));
  if (lowered == "*") return std::nullopt;
  if (lowered == "motion") return SensorKind::Motion;
  if (lowered == "door") return SensorKind::Door;
  if (lowered == "temperature") return SensorKind::Temperature;
  throw Error("unknown sensor kind '" + std::string(field) + "'");
}

inline SymbolPredicate parse_predicate(std::string_view text) {
  auto fields = strings::split(std::string(text), '|');
  if (fields.size() != 3) {
    throw Error("predicate needs location|kind|value, got '" + std::string(text) + "'");
  }
  SymbolPredicate predicate;
  predicate.location = std::string(strings::trim(fields[0]));
  predicate.kind = parse_kind_field(fields[1]);
  predicate.value = std::string(strings::trim(fields[2]));
  if (predicate.location.empty() || predicate.value.empty()) {
    throw Error("predicate has an empty field: '" + std::string(text) + "'");
  }
  return predicate;
}

}  // namespace detail

// Hand-authored grounding of constructs onto the symbol alphabet. File format:
//   [Activity_Label]
//   Construct name = location|kind|value ; location|kind|value
// Construct keys fold case; repeated keys extend the any-of set.
class SymbolMapping {
 public:
  using PredicateSet = std::vector<SymbolPredicate>;

  void add(const std::string& activity, std::string_view construct_name,
           SymbolPredicate predicate) {
    table_[activity][strings::to_lower(strings::trim(construct_name))].push_back(
        std::move(predicate));
  }

  const PredicateSet* lookup(const std::string& activity, std::string_view construct_name) const {
    auto activity_it = table_.find(activity);
    if (activity_it == table_.end()) return nullptr;
    auto it = activity_it->second.find(strings::to_lower(strings::trim(construct_name)));
    if (it == activity_it->second.end() || it->second.empty()) return nullptr;
    return &it->second;
  }

  bool has_activity(const std::string& activity) const { return table_.count(activity) > 0; }

  std::vector<std::string> activities() const {
    std::vector<std::string> labels;
    for (const auto& [label, constructs] : table_) labels.push_back(label);
    return labels;
  }

  static SymbolMapping load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open symbol mapping: " + path);
    SymbolMapping mapping;
    std::string line;
    std::string activity;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto where = [&] { return path + ":" + std::to_string(line_no); };
      auto trimmed = strings::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']' || trimmed.size() < 3) {
          throw Error("malformed section header at " + where());
        }
        activity = std::string(strings::trim(trimmed.substr(1, trimmed.size() - 2)));
        if (activity.empty()) throw Error("empty section header at " + where());
        continue;
      }
      if (activity.empty()) throw Error("predicate line before any section at " + where());
      auto eq = trimmed.find('=');
      if (eq == std::string_view::npos) throw Error("missing '=' at " + where());
      auto name = strings::trim(trimmed.substr(0, eq));
      if (name.empty()) throw Error("empty construct name at " + where());
      bool any = false;
      for (auto part : detail::split_top_level(trimmed.substr(eq + 1))) {
        auto text = strings::trim(part);
        if (text.empty()) continue;
        mapping.add(activity, name, detail::parse_predicate(text));
        any = true;
      }
      if (!any) throw Error("construct maps to no predicates at " + where());
    }
    return mapping;
  }

 private:
  std::map<std::string, std::map<std::string, PredicateSet>> table_;
};

struct PatternStep {
  std::string construct_name;
  std::vector<SymbolPredicate> predicates;  // any-of

  bool matches(const EventSymbol& symbol) const {
    return std::any_of(predicates.begin(), predicates.end(),
                       [&](const SymbolPredicate& p) { return p.matches(symbol); });
  }
};

struct ConstructPattern {
  std::string activity_label;
  Category category = Category::Event;
  std::vector<PatternStep> steps;
  std::int64_t gap_tolerance_s = 300;  // Action: max seconds between steps
  std::int64_t window_s = 3600;        // max seconds across the whole match
};

// Action sets compile every construct into an ordered step; Event sets keep
// the mapped constructs as an unordered containment requirement.
inline ConstructPattern compile_pattern(const ConstructSet& set, const SymbolMapping& mapping,
                                        std::int64_t gap_tolerance_s = 300,
                                        std::int64_t window_s = 3600) {
  if (set.review_state == ReviewState::Machine) throw UnreviewedSet(set.activity_label);
  if (gap_tolerance_s > window_s) {
    throw Error("gap tolerance " + std::to_string(gap_tolerance_s) + "s exceeds window " +
                std::to_string(window_s) + "s");
  }
  ConstructPattern pattern;
  pattern.activity_label = set.activity_label;
  pattern.category = set.category;
  pattern.gap_tolerance_s = gap_tolerance_s;
  pattern.window_s = window_s;
  for (const auto& construct : set.constructs) {
    const auto* predicates = mapping.lookup(set.activity_label, construct.name);
    if (!predicates) {
      if (set.category == Category::Action) throw UnmappedConstruct(construct.name);
      continue;
    }
    pattern.steps.push_back({construct.name, *predicates});
  }
  if (pattern.steps.empty()) throw UnmappedConstruct(set.activity_label);
  return pattern;
}

struct MatchResult {
  std::string activity_label;
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  LogTimestamp start_time;
  LogTimestamp end_time;
  std::vector<std::size_t> witness_indices;  // one per step
};

namespace detail {

constexpr std::int64_t kNsPerSecond = 1'000'000'000;

// Occurrence indices per step, ascending.
inline std::vector<std::vector<std::size_t>> step_occurrences(
    const ConstructPattern& pattern, std::span<const TimedSymbol> symbols) {
  std::vector<std::vector<std::size_t>> occurrences(pattern.steps.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    for (std::size_t j = 0; j < pattern.steps.size(); ++j) {
      if (pattern.steps[j].matches(symbols[i].symbol)) occurrences[j].push_back(i);
    }
  }
  return occurrences;
}

// Minimal-first search for the lexicographically smallest witness tuple of an
// ordered pattern anchored at first witness `anchor`. Failed (step, prev)
// states are memoized; the window is fixed by the anchor so the memo is sound.
class SequenceSearch {
 public:
  SequenceSearch(const ConstructPattern& pattern, std::span<const TimedSymbol> symbols,
                 const std::vector<std::vector<std::size_t>>& occurrences)
      : pattern_(pattern), symbols_(symbols), occurrences_(occurrences) {}

  std::optional<std::vector<std::size_t>> from_anchor(std::size_t anchor) {
    window_end_ns_ = symbols_[anchor].timestamp.epoch_ns + pattern_.window_s * kNsPerSecond;
    if (!feasible_ignoring_gaps(anchor)) return std::nullopt;
    failed_.clear();
    witnesses_.assign(1, anchor);
    if (extend(1, anchor)) return witnesses_;
    return std::nullopt;
  }

 private:
  bool feasible_ignoring_gaps(std::size_t anchor) {
    std::size_t prev = anchor;
    for (std::size_t j = 1; j < pattern_.steps.size(); ++j) {
      const auto& occ = occurrences_[j];
      auto it = std::upper_bound(occ.begin(), occ.end(), prev);
      if (it == occ.end() || symbols_[*it].timestamp.epoch_ns > window_end_ns_) return false;
      prev = *it;
    }
    return true;
  }

  bool extend(std::size_t step, std::size_t prev) {
    if (step == pattern_.steps.size()) return true;
    std::uint64_t key = (static_cast<std::uint64_t>(step) << 48) | prev;
    if (failed_.count(key)) return false;
    const std::int64_t gap_end_ns =
        symbols_[prev].timestamp.epoch_ns + pattern_.gap_tolerance_s * kNsPerSecond;
    const std::int64_t limit_ns = std::min(gap_end_ns, window_end_ns_);
    const auto& occ = occurrences_[step];
    for (auto it = std::upper_bound(occ.begin(), occ.end(), prev); it != occ.end(); ++it) {
      if (symbols_[*it].timestamp.epoch_ns > limit_ns) break;
      witnesses_.push_back(*it);
      if (extend(step + 1, *it)) return true;
      witnesses_.pop_back();
    }
    failed_.insert(key);
    return false;
  }

  const ConstructPattern& pattern_;
  std::span<const TimedSymbol> symbols_;
  const std::vector<std::vector<std::size_t>>& occurrences_;
  std::int64_t window_end_ns_ = 0;
  std::vector<std::size_t> witnesses_;
  std::unordered_set<std::uint64_t> failed_;
};

inline std::vector<MatchResult> match_sequence(const ConstructPattern& pattern,
                                               std::span<const TimedSymbol> symbols,
                                               const std::vector<std::vector<std::size_t>>& occ) {
  std::vector<MatchResult> matches;
  SequenceSearch search(pattern, symbols, occ);
  const auto& anchors = occ[0];
  std::size_t scan = 0;
  for (auto it = anchors.begin(); it != anchors.end(); ++it) {
    if (*it < scan) continue;
    auto witnesses = search.from_anchor(*it);
    if (!witnesses) continue;
    MatchResult match;
    match.activity_label = pattern.activity_label;
    match.start_index = witnesses->front();
    match.end_index = witnesses->back();
    match.start_time = symbols[match.start_index].timestamp;
    match.end_time = symbols[match.end_index].timestamp;
    match.witness_indices = std::move(*witnesses);
    scan = match.end_index + 1;
    matches.push_back(std::move(match));
  }
  return matches;
}

inline std::vector<MatchResult> match_containment(const ConstructPattern& pattern,
                                                  std::span<const TimedSymbol> symbols,
                                                  const std::vector<std::vector<std::size_t>>& occ) {
  std::vector<MatchResult> matches;
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    bool anchors_something = false;
    for (const auto& step : pattern.steps) {
      if (step.matches(symbols[s].symbol)) {
        anchors_something = true;
        break;
      }
    }
    if (!anchors_something) continue;
    const std::int64_t window_end_ns =
        symbols[s].timestamp.epoch_ns + pattern.window_s * kNsPerSecond;
    std::vector<std::size_t> witnesses;
    witnesses.reserve(pattern.steps.size());
    bool complete = true;
    for (std::size_t j = 0; j < pattern.steps.size(); ++j) {
      const auto& occurrences = occ[j];
      auto it = std::lower_bound(occurrences.begin(), occurrences.end(), s);
      if (it == occurrences.end() || symbols[*it].timestamp.epoch_ns > window_end_ns) {
        complete = false;
        break;
      }
      witnesses.push_back(*it);
    }
    if (!complete) continue;
    MatchResult match;
    match.activity_label = pattern.activity_label;
    match.start_index = s;
    match.end_index = *std::max_element(witnesses.begin(), witnesses.end());
    match.start_time = symbols[match.start_index].timestamp;
    match.end_time = symbols[match.end_index].timestamp;
    match.witness_indices = std::move(witnesses);
    s = match.end_index;  // loop increment resumes past the match
    matches.push_back(std::move(match));
  }
  return matches;
}

}  // namespace detail

// Leftmost non-overlapping matches, sorted by start. Action patterns bind the
// lexicographically smallest witness tuple (ties in start resolved toward the
// earliest later witnesses) with every inter-witness gap within gap_tolerance
// and the whole span within window; Event patterns require one witness per
// step, any order, within window of the first witness.
inline std::vector<MatchResult> match_stream(const ConstructPattern& pattern,
                                             std::span<const TimedSymbol> symbols) {
  if (pattern.steps.empty() || symbols.empty()) return {};
  auto occurrences = detail::step_occurrences(pattern, symbols);
  for (const auto& occ : occurrences) {
    if (occ.empty()) return {};
  }
  if (pattern.category == Category::Action) {
    return detail::match_sequence(pattern, symbols, occurrences);
  }
  return detail::match_containment(pattern, symbols, occurrences);
}

struct EvalConfig {
  double overlap_threshold = 0.5;  // fraction of the shorter span
};

struct LabelMetrics {
  std::string label;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<LabelMetrics> per_label;  // sorted by label
  LabelMetrics macro;                   // counts summed, ratios averaged
};

namespace detail {

// Overlap as a fraction of the shorter span; an instantaneous span counts as
// fully overlapped when it touches the other span at all.
inline double overlap_ratio(const LogTimestamp& s1, const LogTimestamp& e1,
                            const LogTimestamp& s2, const LogTimestamp& e2) {
  const std::int64_t lo = std::max(s1.epoch_ns, s2.epoch_ns);
  const std::int64_t hi = std::min(e1.epoch_ns, e2.epoch_ns);
  if (lo > hi) return 0.0;
  const std::int64_t shorter = std::min(e1.epoch_ns - s1.epoch_ns, e2.epoch_ns - s2.epoch_ns);
  if (shorter == 0) return 1.0;
  return static_cast<double>(hi - lo) / static_cast<double>(shorter);
}

inline double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

// A match is a true positive when it overlaps an uncredited same-label ground
// truth span by at least the threshold fraction of the shorter span; each
// instance is credited once, to the best-overlapping match first come. The
// match list is canonically ordered internally, so the result does not depend
// on its permutation.
inline EvalReport evaluate(std::span<const MatchResult> matches,
                           std::span<const ActivityInstance> truth,
                           const EvalConfig& config = {}) {
  std::vector<const MatchResult*> ordered;
  ordered.reserve(matches.size());
  for (const auto& m : matches) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(), [](const MatchResult* a, const MatchResult* b) {
    if (a->start_time.epoch_ns != b->start_time.epoch_ns) {
      return a->start_time.epoch_ns < b->start_time.epoch_ns;
    }
    if (a->end_time.epoch_ns != b->end_time.epoch_ns) {
      return a->end_time.epoch_ns < b->end_time.epoch_ns;
    }
    return a->activity_label < b->activity_label;
  });

  std::vector<bool> credited(truth.size(), false);
  std::map<std::string, LabelMetrics> by_label;
  for (const auto& instance : truth) by_label[instance.label].label = instance.label;

  for (const auto* match : ordered) {
    auto& metrics = by_label[match->activity_label];
    metrics.label = match->activity_label;
    double best = 0.0;
    std::size_t best_index = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (credited[i] || truth[i].label != match->activity_label) continue;
      double ratio = detail::overlap_ratio(match->start_time, match->end_time, truth[i].start,
                                           truth[i].end);
      if (ratio < config.overlap_threshold) continue;
      if (best_index == truth.size() || ratio > best ||
          (ratio == best && truth[i].start.epoch_ns < truth[best_index].start.epoch_ns)) {
        best = ratio;
        best_index = i;
      }
    }
    if (best_index < truth.size()) {
      credited[best_index] = true;
      ++metrics.tp;
    } else {
      ++metrics.fp;
    }
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!credited[i]) ++by_label[truth[i].label].fn;
  }

  EvalReport report;
  report.macro.label = "macro";
  for (auto& [label, metrics] : by_label) {
    metrics.precision = detail::safe_ratio(metrics.tp, metrics.tp + metrics.fp);
    metrics.recall = detail::safe_ratio(metrics.tp, metrics.tp + metrics.fn);
    metrics.f1 = metrics.precision + metrics.recall == 0.0
                     ? 0.0
                     : 2.0 * metrics.precision * metrics.recall /
                           (metrics.precision + metrics.recall);
    report.macro.tp += metrics.tp;
    report.macro.fp += metrics.fp;
    report.macro.fn += metrics.fn;
    report.macro.precision += metrics.precision;
    report.macro.recall += metrics.recall;
    report.macro.f1 += metrics.f1;
    report.per_label.push_back(metrics);
  }
  if (!report.per_label.empty()) {
    const auto n = static_cast<double>(report.per_label.size());
    report.macro.precision /= n;
    report.macro.recall /= n;
    report.macro.f1 /= n;
  }
  return report;
}

inline std::string metrics_to_csv(const EvalReport& report) {
  std::string out = "label,tp,fp,fn,precision,recall,f1\n";
  auto row = [&out](const LabelMetrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%zu,%.4f,%.4f,%.4f\n", m.label.c_str(), m.tp,
                  m.fp, m.fn, m.precision, m.recall, m.f1);
    out += buf;
  };
  for (const auto& metrics : report.per_label) row(metrics);
  row(report.macro);
  return out;
}

}  // namespace cminer
