// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference for begin/end pairing, written against the stated
// rules rather than the library code: each label is scanned independently,
// so any divergence from the shared-register implementation is a bug in one
// of the two.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cminer/casas.hpp"

namespace testoracle {

struct Span {
  std::string label;
  std::size_t first_pos;
  std::size_t last_pos;
  bool truncated;

  bool operator==(const Span&) const = default;
};

// annotations[p] is the marker attached to stream position p, if any.
// Positions are assumed already sorted by timestamp.
inline std::vector<Span> segment_reference(
    const std::vector<std::optional<cminer::ActivityAnnotation>>& annotations) {
  const std::size_t n = annotations.size();
  std::set<std::string> labels;
  for (const auto& a : annotations) {
    if (a) labels.insert(a->label);
  }
  std::vector<Span> out;
  for (const auto& label : labels) {
    std::optional<std::size_t> open;
    for (std::size_t p = 0; p < n; ++p) {
      if (!annotations[p] || annotations[p]->label != label) continue;
      if (annotations[p]->marker == cminer::AnnotationMarker::Begin) {
        if (open) {
          out.push_back({label, *open, p - 1, true});
        }
        open = p;
      } else {
        if (open) {
          out.push_back({label, *open, p, false});
          open.reset();
        }
        // end without begin: dropped
      }
    }
    if (open) out.push_back({label, *open, n - 1, true});
  }
  std::sort(out.begin(), out.end(), [](const Span& a, const Span& b) {
    if (a.first_pos != b.first_pos) return a.first_pos < b.first_pos;
    return a.label < b.label;
  });
  return out;
}

// Builds a stream of one event per annotation slot, timestamps strictly
// increasing one second apart, and runs the library segmenter on it.
inline std::vector<Span> segment_via_library(
    const std::vector<std::optional<cminer::ActivityAnnotation>>& annotations,
    cminer::Diagnostics* diagnostics = nullptr) {
  cminer::ParseResult parsed;
  for (std::size_t p = 0; p < annotations.size(); ++p) {
    cminer::SensorEvent ev;
    ev.timestamp.epoch_ns = static_cast<std::int64_t>(p + 1) * 1'000'000'000;
    ev.sensor_id = "M001";
    ev.kind = cminer::SensorKind::Motion;
    ev.value = "ON";
    if (annotations[p]) parsed.annotations.push_back({p, *annotations[p]});
    parsed.events.push_back(std::move(ev));
  }
  auto instances = cminer::segment_instances(parsed, diagnostics);
  std::vector<Span> out;
  for (const auto& inst : instances) {
    Span s;
    s.label = inst.label;
    // timestamps are (pos+1) seconds, so positions are recoverable
    s.first_pos = static_cast<std::size_t>(inst.events.front().timestamp.epoch_ns / 1'000'000'000) - 1;
    s.last_pos = static_cast<std::size_t>(inst.events.back().timestamp.epoch_ns / 1'000'000'000) - 1;
    s.truncated = inst.truncated;
    // membership must be the full contiguous slice
    if (inst.events.size() != s.last_pos - s.first_pos + 1) {
      s.last_pos = static_cast<std::size_t>(-1);  // poison; comparison will fail loudly
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace testoracle
