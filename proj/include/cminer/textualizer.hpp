// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "cminer/casas.hpp"
#include "cminer/errors.hpp"
#include "cminer/locations.hpp"
#include "cminer/timestamp.hpp"
#include "cminer/version.hpp"

namespace cminer {

class EmptyInstance : public Error {
 public:
  explicit EmptyInstance(const std::string& ref)
      : Error("activity instance has no events: " + ref) {}
};

struct InstanceParagraph {
  std::string activity_label;
  std::string text;
  std::size_t sentence_count = 0;
  std::string instance_ref;
};

struct TextualizerOptions {
  // gaps at or above this many seconds render as hours and minutes
  std::int64_t long_gap_cutoff_s = 3600;
};

namespace detail {

inline std::string_view kind_word(SensorKind kind) {
  switch (kind) {
    case SensorKind::Motion: return "motion";
    case SensorKind::Door: return "door";
    case SensorKind::Temperature: return "temperature";
  }
  return "?";
}

inline std::string delta_clause(std::int64_t delta_s, const TextualizerOptions& opts) {
  if (delta_s >= opts.long_gap_cutoff_s) {
    return ", " + std::to_string(delta_s / 3600) + " hours and " +
           std::to_string((delta_s / 60) % 60) + " minutes after the previous event";
  }
  return ", " + std::to_string(delta_s) + " seconds after the previous event";
}

}  // namespace detail

// One sentence per event. Location phrases beginning with "between" carry
// their own preposition, so the "in the" connective is dropped for them.
inline std::string encode_event(const SensorEvent& event,
                                const std::optional<LogTimestamp>& prev_timestamp,
                                const LocationMap& locations,
                                const TextualizerOptions& opts = {}) {
  const std::string& phrase = locations.lookup(event.sensor_id);
  std::string out = "At ";
  out += format_clock_12h(event.timestamp);
  out += ", the ";
  out += detail::kind_word(event.kind);
  out += " sensor ";
  if (!strings::starts_with(strings::to_lower(phrase), "between")) {
    out += "in the ";
  }
  out += phrase;
  out += " fired with the value ";
  out += event.value;
  if (prev_timestamp) {
    out += detail::delta_clause(LogTimestamp::delta_seconds(*prev_timestamp, event.timestamp), opts);
  }
  out += '.';
  return out;
}

// Paragraph = per-event sentences in stream order, joined by single spaces.
// Temperature events are encoded like the rest; filtering is the prompt's job.
inline InstanceParagraph encode_instance(const ActivityInstance& instance,
                                         const LocationMap& locations,
                                         const TextualizerOptions& opts = {}) {
  if (instance.events.empty()) throw EmptyInstance(instance.ref);
  InstanceParagraph para;
  para.activity_label = instance.label;
  para.instance_ref = instance.ref;
  std::optional<LogTimestamp> prev;
  for (const auto& event : instance.events) {
    if (para.sentence_count > 0) para.text += ' ';
    para.text += encode_event(event, prev, locations, opts);
    ++para.sentence_count;
    prev = event.timestamp;
  }
  return para;
}

}  // namespace cminer
