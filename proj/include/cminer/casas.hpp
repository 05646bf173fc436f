// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cminer/errors.hpp"
#include "cminer/strings.hpp"
#include "cminer/timestamp.hpp"

namespace cminer {

enum class SensorKind { Motion, Door, Temperature };

inline std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::Motion: return "Motion";
    case SensorKind::Door: return "Door";
    case SensorKind::Temperature: return "Temperature";
  }
  return "?";
}

struct SensorEvent {
  LogTimestamp timestamp;
  std::string sensor_id;
  SensorKind kind = SensorKind::Motion;
  std::string value;

  bool operator==(const SensorEvent&) const = default;
};

enum class AnnotationMarker { Begin, End };

struct ActivityAnnotation {
  std::string label;
  AnnotationMarker marker = AnnotationMarker::Begin;

  bool operator==(const ActivityAnnotation&) const = default;
};

struct ActivityInstance {
  std::string label;
  std::vector<SensorEvent> events;
  LogTimestamp start;
  LogTimestamp end;
  bool truncated = false;
  std::string ref;  // stable identifier assigned at segmentation time
};

enum class ParseErrorClass { MalformedLine, UnknownSensorPrefix, ValueVocabulary, UnmatchedEnd, UnsortedInput };

inline std::string_view to_string(ParseErrorClass cls) {
  switch (cls) {
    case ParseErrorClass::MalformedLine: return "MalformedLine";
    case ParseErrorClass::UnknownSensorPrefix: return "UnknownSensorPrefix";
    case ParseErrorClass::ValueVocabulary: return "ValueVocabulary";
    case ParseErrorClass::UnmatchedEnd: return "UnmatchedEnd";
    case ParseErrorClass::UnsortedInput: return "UnsortedInput";
  }
  return "?";
}

struct Diagnostic {
  std::size_t line_no = 0;  // 1-based; 0 when not tied to a line
  ParseErrorClass error = ParseErrorClass::MalformedLine;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  void add(std::size_t line_no, ParseErrorClass cls, std::string message) {
    items.push_back({line_no, cls, std::move(message)});
  }
  std::size_t count(ParseErrorClass cls) const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [&](const Diagnostic& d) { return d.error == cls; }));
  }
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  // line_no<TAB>error_class<TAB>message, one record per diagnostic.
  std::string to_records() const {
    std::string out;
    for (const auto& d : items) {
      out += std::to_string(d.line_no);
      out += '\t';
      out += to_string(d.error);
      out += '\t';
      out += d.message;
      out += '\n';
    }
    return out;
  }
};

class ParseError : public Error {
 public:
  ParseError(ParseErrorClass cls, std::size_t line_no, const std::string& message)
      : Error(message), cls_(cls), line_no_(line_no) {}
  ParseErrorClass error_class() const { return cls_; }
  std::size_t line_no() const { return line_no_; }

 private:
  ParseErrorClass cls_;
  std::size_t line_no_;
};

// Kind is implied by the sensor id prefix: M → Motion, D → Door, T → Temperature.
inline SensorKind infer_sensor_kind(std::string_view sensor_id) {
  if (sensor_id.empty()) {
    throw ParseError(ParseErrorClass::UnknownSensorPrefix, 0, "empty sensor id");
  }
  switch (sensor_id.front()) {
    case 'M': return SensorKind::Motion;
    case 'D': return SensorKind::Door;
    case 'T': return SensorKind::Temperature;
    default:
      throw ParseError(ParseErrorClass::UnknownSensorPrefix, 0,
                       "unknown sensor prefix in '" + std::string(sensor_id) + "'");
  }
}

namespace detail {

inline bool is_decimal_number(std::string_view s) {
  if (s.empty()) return false;
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;  // from_chars accepts '-' but not '+'
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace detail

// Checks the value against the kind's vocabulary: Motion ON|OFF, Door
// OPEN|CLOSE, Temperature any decimal number.
inline bool value_in_vocabulary(SensorKind kind, std::string_view value) {
  switch (kind) {
    case SensorKind::Motion: return value == "ON" || value == "OFF";
    case SensorKind::Door: return value == "OPEN" || value == "CLOSE";
    case SensorKind::Temperature: return detail::is_decimal_number(value);
  }
  return false;
}

struct ParsedLine {
  SensorEvent event;
  std::optional<ActivityAnnotation> annotation;
};

// Line grammar: date time sensor_id value [label marker], whitespace separated
// (tabs or spaces). marker is exactly "begin" or "end".
inline ParsedLine parse_event_line(std::string_view line, std::size_t line_no) {
  auto tokens = strings::split_ws(line);
  if (tokens.size() != 4 && tokens.size() != 6) {
    throw ParseError(ParseErrorClass::MalformedLine, line_no,
                     "expected 4 or 6 fields, got " + std::to_string(tokens.size()));
  }
  auto ts = parse_timestamp(tokens[0], tokens[1]);
  if (!ts) {
    throw ParseError(ParseErrorClass::MalformedLine, line_no,
                     "unparseable timestamp '" + std::string(tokens[0]) + " " +
                         std::string(tokens[1]) + "'");
  }
  SensorKind kind;
  try {
    kind = infer_sensor_kind(tokens[2]);
  } catch (const ParseError& e) {
    throw ParseError(ParseErrorClass::UnknownSensorPrefix, line_no, e.what());
  }
  if (!value_in_vocabulary(kind, tokens[3])) {
    throw ParseError(ParseErrorClass::ValueVocabulary, line_no,
                     "value '" + std::string(tokens[3]) + "' not in " +
                         std::string(to_string(kind)) + " vocabulary");
  }
  ParsedLine out;
  out.event = SensorEvent{*ts, std::string(tokens[2]), kind, std::string(tokens[3])};
  if (tokens.size() == 6) {
    AnnotationMarker marker;
    if (tokens[5] == "begin") {
      marker = AnnotationMarker::Begin;
    } else if (tokens[5] == "end") {
      marker = AnnotationMarker::End;
    } else {
      throw ParseError(ParseErrorClass::MalformedLine, line_no,
                       "marker must be 'begin' or 'end', got '" + std::string(tokens[5]) + "'");
    }
    if (tokens[4].empty()) {
      throw ParseError(ParseErrorClass::MalformedLine, line_no, "empty activity label");
    }
    out.annotation = ActivityAnnotation{std::string(tokens[4]), marker};
  }
  return out;
}

// Re-renders a parsed line with single-space separators; fractional seconds
// keep their original width, so parse → format round-trips token sequences.
inline std::string format_event_line(const SensorEvent& event,
                                     const std::optional<ActivityAnnotation>& annotation = {}) {
  std::string out = format_timestamp(event.timestamp);
  out += ' ';
  out += event.sensor_id;
  out += ' ';
  out += event.value;
  if (annotation) {
    out += ' ';
    out += annotation->label;
    out += annotation->marker == AnnotationMarker::Begin ? " begin" : " end";
  }
  return out;
}

struct StreamAnnotation {
  std::size_t event_index = 0;  // index into ParseResult::events
  ActivityAnnotation annotation;
};

struct ParseResult {
  std::vector<SensorEvent> events;
  std::vector<StreamAnnotation> annotations;
  Diagnostics diagnostics;
};

// Parses every line; malformed lines become diagnostics, never aborts.
// Blank lines are ignored. Line numbers are 1-based.
inline ParseResult parse_stream(std::span<const std::string> lines) {
  ParseResult result;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (strings::trim(line).empty()) continue;
    try {
      ParsedLine parsed = parse_event_line(line, i + 1);
      if (parsed.annotation) {
        result.annotations.push_back({result.events.size(), *parsed.annotation});
      }
      result.events.push_back(std::move(parsed.event));
    } catch (const ParseError& e) {
      result.diagnostics.add(e.line_no(), e.error_class(), e.what());
    }
  }
  return result;
}

inline ParseResult parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_stream(lines);
}

// Begin/end pairing over a per-label open-instance register.
//
// Semantics (the brute-force oracle in the tests implements the same rules
// independently):
//  - items are processed in timestamp order; unsorted input is stably sorted
//    first and recorded as an UnsortedInput diagnostic
//  - begin(L) while L is open closes the open instance over the events
//    strictly before the new begin (truncated=true) and opens a fresh one
//  - end(L) with no open L is an UnmatchedEnd diagnostic and is skipped
//  - a begin still open at stream end closes over the remaining events with
//    truncated=true
//  - an instance's events are the contiguous stream slice between its begin
//    and end positions, inclusive; instances of different labels may overlap
inline std::vector<ActivityInstance> segment_instances(const ParseResult& parsed,
                                                       Diagnostics* diagnostics = nullptr) {
  const auto& events = parsed.events;
  const std::size_t n = events.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  bool sorted = std::is_sorted(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].timestamp < events[b].timestamp;
  });
  if (!sorted) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return events[a].timestamp < events[b].timestamp;
    });
    if (diagnostics) {
      diagnostics->add(0, ParseErrorClass::UnsortedInput,
                       "input events were not sorted by timestamp; stably sorted");
    }
  }

  // position of each original event in the sorted stream
  std::vector<std::size_t> pos_of(n);
  for (std::size_t p = 0; p < n; ++p) pos_of[order[p]] = p;

  std::vector<std::optional<ActivityAnnotation>> annotation_at(n);
  for (const auto& a : parsed.annotations) annotation_at[pos_of[a.event_index]] = a.annotation;

  struct Open {
    std::size_t pos;
  };
  std::map<std::string, Open> open;  // per-label register
  std::vector<ActivityInstance> instances;

  auto emit = [&](const std::string& label, std::size_t from, std::size_t to, bool truncated) {
    ActivityInstance inst;
    inst.label = label;
    inst.truncated = truncated;
    inst.events.reserve(to - from + 1);
    for (std::size_t p = from; p <= to; ++p) inst.events.push_back(events[order[p]]);
    inst.start = inst.events.front().timestamp;
    inst.end = inst.events.back().timestamp;
    instances.push_back(std::move(inst));
  };

  for (std::size_t p = 0; p < n; ++p) {
    if (!annotation_at[p]) continue;
    const auto& ann = *annotation_at[p];
    auto it = open.find(ann.label);
    if (ann.marker == AnnotationMarker::Begin) {
      if (it != open.end()) {
        emit(ann.label, it->second.pos, p == 0 ? 0 : p - 1, true);
        it->second.pos = p;
      } else {
        open.emplace(ann.label, Open{p});
      }
    } else {
      if (it == open.end()) {
        if (diagnostics) {
          diagnostics->add(0, ParseErrorClass::UnmatchedEnd,
                           "end marker for '" + ann.label + "' with no open instance");
        }
        continue;
      }
      emit(ann.label, it->second.pos, p, false);
      open.erase(it);
    }
  }
  for (const auto& [label, o] : open) emit(label, o.pos, n - 1, true);

  std::stable_sort(instances.begin(), instances.end(),
                   [](const ActivityInstance& a, const ActivityInstance& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.label < b.label;
                   });
  for (std::size_t i = 0; i < instances.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "inst-%06zu", i + 1);
    instances[i].ref = buf;
  }
  return instances;
}

// Raw label → canonical label, identity where unmapped. One hop only.
struct LabelMergeMap {
  std::unordered_map<std::string, std::string> mapping;

  std::string canonical(const std::string& raw) const {
    auto it = mapping.find(raw);
    return it == mapping.end() ? raw : it->second;
  }

  // Two-column CSV raw_label,canonical_label; a "raw" header row is skipped.
  static LabelMergeMap load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open merge map file: " + path);
    LabelMergeMap map;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      auto trimmed = strings::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      auto fields = strings::parse_csv_row(trimmed);
      if (fields.size() != 2) throw Error("merge map row needs 2 fields: " + line);
      std::string raw =
          std::string(strings::trim(fields[0]));
      std::string canonical = std::string(strings::trim(fields[1]));
      if (first && (raw == "raw" || raw == "raw_label")) {
        first = false;
        continue;
      }
      first = false;
      map.mapping[raw] = canonical;
    }
    return map;
  }
};

struct CanonicalizeResult {
  std::vector<ActivityInstance> instances;
  std::map<std::string, std::size_t> counts_per_label;
};

// Rewrites labels through the map and removes instances whose canonical
// label is in other_labels (the null class).
inline CanonicalizeResult canonicalize_labels(std::vector<ActivityInstance> instances,
                                              const LabelMergeMap& merge_map,
                                              const std::set<std::string>& other_labels = {"Other"}) {
  CanonicalizeResult result;
  for (auto& inst : instances) {
    inst.label = merge_map.canonical(inst.label);
    if (other_labels.count(inst.label)) continue;
    ++result.counts_per_label[inst.label];
    result.instances.push_back(std::move(inst));
  }
  return result;
}

}  // namespace cminer
