// SPDX-License-Identifier: Apache-2.0
#include "cminer/casas.hpp"

#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "segmentation_oracle.hpp"
#include "test_util.hpp"

using namespace cminer;

namespace {

ParsedLine parse_ok(std::string_view line) { return parse_event_line(line, 1); }

ParseErrorClass parse_fails(std::string_view line) {
  try {
    parse_event_line(line, 7);
    FAIL("expected ParseError for: " << line);
  } catch (const ParseError& e) {
    CHECK(e.line_no() == 7);
    return e.error_class();
  }
  return ParseErrorClass::MalformedLine;
}

}  // namespace

TEST_CASE("parse_event_line accepts all three sensor kinds", "[casas]") {
  auto m = parse_ok("2010-11-04 05:40:51.303739 M004 ON");
  CHECK(m.event.sensor_id == "M004");
  CHECK(m.event.kind == SensorKind::Motion);
  CHECK(m.event.value == "ON");
  CHECK_FALSE(m.annotation);

  auto d = parse_ok("2010-11-04 05:40:52 D002 CLOSE");
  CHECK(d.event.kind == SensorKind::Door);

  auto t = parse_ok("2010-11-04 05:40:53.1 T003 21.5");
  CHECK(t.event.kind == SensorKind::Temperature);
  CHECK(t.event.value == "21.5");

  auto neg = parse_ok("2010-11-04 05:40:54 T001 -3.25");
  CHECK(neg.event.value == "-3.25");
}

TEST_CASE("parse_event_line reads annotations", "[casas]") {
  auto begin = parse_ok("2010-11-04 05:40:51 M004 ON Sleeping begin");
  REQUIRE(begin.annotation);
  CHECK(begin.annotation->label == "Sleeping");
  CHECK(begin.annotation->marker == AnnotationMarker::Begin);

  auto end = parse_ok("2010-11-04 06:00:00 M004 OFF Bed_to_Toilet end");
  REQUIRE(end.annotation);
  CHECK(end.annotation->marker == AnnotationMarker::End);
}

TEST_CASE("parse_event_line tolerates tabs and extra spaces", "[casas]") {
  auto ev = parse_ok("2010-11-04\t05:40:51  M004\tON");
  CHECK(ev.event.sensor_id == "M004");
}

TEST_CASE("parse_event_line classifies failures", "[casas]") {
  CHECK(parse_fails("2010-11-04 05:40:51 M004") == ParseErrorClass::MalformedLine);
  CHECK(parse_fails("2010-11-04 05:40:51 M004 ON Sleeping") == ParseErrorClass::MalformedLine);
  CHECK(parse_fails("2010-11-04 05:40:51 M004 ON Sleeping begin extra") ==
        ParseErrorClass::MalformedLine);
  CHECK(parse_fails("2010-13-04 05:40:51 M004 ON") == ParseErrorClass::MalformedLine);
  CHECK(parse_fails("2010-11-04 25:40:51 M004 ON") == ParseErrorClass::MalformedLine);
  CHECK(parse_fails("2010-11-04 05:40:51 X042 ON") == ParseErrorClass::UnknownSensorPrefix);
  CHECK(parse_fails("2010-11-04 05:40:51 M004 on") == ParseErrorClass::ValueVocabulary);
  CHECK(parse_fails("2010-11-04 05:40:51 D001 ON") == ParseErrorClass::ValueVocabulary);
  CHECK(parse_fails("2010-11-04 05:40:51 T001 warm") == ParseErrorClass::ValueVocabulary);
  CHECK(parse_fails("2010-11-04 05:40:51 M004 ON Sleeping started") ==
        ParseErrorClass::MalformedLine);
}

TEST_CASE("format_event_line round-trips single-space lines", "[casas]") {
  const char* lines[] = {
      "2010-11-04 05:40:51.303739 M004 ON",
      "2010-11-04 05:40:52 D002 CLOSE",
      "2010-11-04 05:40:53.1 T003 21.5",
      "2010-11-04 05:40:54 M004 OFF Sleeping begin",
      "2010-11-04 06:00:00.020 M005 ON Sleeping end",
  };
  for (const char* line : lines) {
    auto parsed = parse_ok(line);
    CHECK(format_event_line(parsed.event, parsed.annotation) == line);
  }
}

TEST_CASE("synthetic fixture parses with exact diagnostics", "[casas][fixture]") {
  auto lines = testutil::read_lines(testutil::test_data_dir() / "synthetic_casas.log");
  REQUIRE(lines.size() == 500);
  auto result = parse_stream(lines);
  CHECK(result.events.size() == 495);
  REQUIRE(result.diagnostics.size() == 5);

  std::map<std::size_t, ParseErrorClass> expected = {
      {42, ParseErrorClass::MalformedLine},
      {137, ParseErrorClass::UnknownSensorPrefix},
      {256, ParseErrorClass::ValueVocabulary},
      {333, ParseErrorClass::MalformedLine},
      {444, ParseErrorClass::MalformedLine},
  };
  for (const auto& d : result.diagnostics.items) {
    auto it = expected.find(d.line_no);
    REQUIRE(it != expected.end());
    CHECK(d.error == it->second);
  }

  SECTION("round-trip is byte-identical for every well-formed line") {
    std::size_t ok = 0;
    for (const auto& line : lines) {
      try {
        auto parsed = parse_event_line(line, 1);
        CHECK(format_event_line(parsed.event, parsed.annotation) == line);
        ++ok;
      } catch (const ParseError&) {
      }
    }
    CHECK(ok == 495);
  }

  SECTION("fixture segments into the planted instances") {
    Diagnostics diag;
    auto instances = segment_instances(result, &diag);
    CHECK(diag.empty());
    REQUIRE(instances.size() == 7);
    std::map<std::string, std::size_t> counts;
    for (const auto& inst : instances) {
      ++counts[inst.label];
      CHECK_FALSE(inst.truncated);
      CHECK(inst.start <= inst.end);
      CHECK(!inst.events.empty());
    }
    CHECK(counts["Sleeping"] == 2);
    CHECK(counts["Meal_Preparation"] == 2);
    CHECK(counts["Wash_Dishes"] == 1);
    CHECK(counts["Relax"] == 1);
    CHECK(counts["Bed_to_Toilet"] == 1);
    CHECK(instances.front().ref == "inst-000001");
    CHECK(instances.back().ref == "inst-000007");
  }
}

namespace {

using Ann = std::optional<ActivityAnnotation>;

Ann A_begin() { return ActivityAnnotation{"A", AnnotationMarker::Begin}; }
Ann A_end() { return ActivityAnnotation{"A", AnnotationMarker::End}; }
Ann B_begin() { return ActivityAnnotation{"B", AnnotationMarker::Begin}; }
Ann B_end() { return ActivityAnnotation{"B", AnnotationMarker::End}; }

void check_equivalence(const std::vector<Ann>& annotations) {
  auto expected = testoracle::segment_reference(annotations);
  auto actual = testoracle::segment_via_library(annotations);
  REQUIRE(actual.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CAPTURE(i);
    CHECK(actual[i] == expected[i]);
  }
}

}  // namespace

TEST_CASE("segmentation pairs nominal begin/end", "[casas][segment]") {
  std::vector<Ann> ann = {{}, A_begin(), {}, {}, A_end(), {}};
  auto spans = testoracle::segment_via_library(ann);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == testoracle::Span{"A", 1, 4, false});
}

TEST_CASE("instances of different labels overlap freely", "[casas][segment]") {
  std::vector<Ann> ann = {A_begin(), {}, B_begin(), {}, A_end(), {}, B_end()};
  auto spans = testoracle::segment_via_library(ann);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == testoracle::Span{"A", 0, 4, false});
  CHECK(spans[1] == testoracle::Span{"B", 2, 6, false});
}

TEST_CASE("a second begin closes the open instance as truncated", "[casas][segment]") {
  std::vector<Ann> ann = {A_begin(), {}, {}, A_begin(), {}, A_end()};
  auto spans = testoracle::segment_via_library(ann);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == testoracle::Span{"A", 0, 2, true});
  CHECK(spans[1] == testoracle::Span{"A", 3, 5, false});
}

TEST_CASE("unmatched end is a diagnostic, not an instance", "[casas][segment]") {
  std::vector<Ann> ann = {{}, A_end(), {}, A_begin(), A_end()};
  Diagnostics diag;
  auto spans = testoracle::segment_via_library(ann, &diag);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == testoracle::Span{"A", 3, 4, false});
  CHECK(diag.count(ParseErrorClass::UnmatchedEnd) == 1);
}

TEST_CASE("open instance at stream end is truncated", "[casas][segment]") {
  std::vector<Ann> ann = {{}, A_begin(), {}, {}};
  auto spans = testoracle::segment_via_library(ann);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == testoracle::Span{"A", 1, 3, true});
}

TEST_CASE("unsorted input is stably sorted and flagged", "[casas][segment]") {
  ParseResult parsed;
  auto add = [&](std::int64_t sec, const char* label, AnnotationMarker marker) {
    SensorEvent ev;
    ev.timestamp.epoch_ns = sec * 1'000'000'000;
    ev.sensor_id = "M001";
    ev.kind = SensorKind::Motion;
    ev.value = "ON";
    if (label) parsed.annotations.push_back({parsed.events.size(), {label, marker}});
    parsed.events.push_back(ev);
  };
  add(5, "A", AnnotationMarker::End);    // out of order: belongs after the begin
  add(1, "A", AnnotationMarker::Begin);  // earliest event
  add(3, nullptr, AnnotationMarker::Begin);

  Diagnostics diag;
  auto instances = segment_instances(parsed, &diag);
  CHECK(diag.count(ParseErrorClass::UnsortedInput) == 1);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].events.size() == 3);
  CHECK(instances[0].start.epoch_ns == 1'000'000'000);
  CHECK(instances[0].end.epoch_ns == 5'000'000'000);
}

TEST_CASE("segmentation matches the reference on exhaustive short sequences", "[casas][oracle]") {
  // all marker sequences of length <= 6 over {A,B} x {begin,end}
  const std::vector<Ann> alphabet = {A_begin(), A_end(), B_begin(), B_end()};
  for (std::size_t len = 0; len <= 6; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= alphabet.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Ann> ann;
      std::size_t c = code;
      for (std::size_t i = 0; i < len; ++i) {
        ann.push_back(alphabet[c % alphabet.size()]);
        c /= alphabet.size();
      }
      check_equivalence(ann);
    }
  }
}

TEST_CASE("segmentation matches the reference on random long sequences", "[casas][oracle]") {
  std::mt19937 rng(7031);
  const std::vector<Ann> alphabet = {A_begin(), A_end(), B_begin(), B_end(),
                                     Ann{}, Ann{}};  // plain events too
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> len_dist(9, 40);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Ann> ann;
    std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) ann.push_back(alphabet[pick(rng)]);
    check_equivalence(ann);
  }
}

TEST_CASE("merge map canonicalizes and drops the null class", "[casas][merge]") {
  testutil::TempDir tmp("merge");
  testutil::write_file(tmp / "map.csv",
                       "raw,canonical\n"
                       "Wash_Dishes,Meal_Preparation\n"
                       "Resperate,Other\n");
  auto map = LabelMergeMap::load((tmp / "map.csv").string());
  CHECK(map.canonical("Wash_Dishes") == "Meal_Preparation");
  CHECK(map.canonical("Resperate") == "Other");
  CHECK(map.canonical("Sleeping") == "Sleeping");  // identity when unmapped

  std::vector<ActivityInstance> instances(4);
  instances[0].label = "Wash_Dishes";
  instances[1].label = "Sleeping";
  instances[2].label = "Resperate";
  instances[3].label = "Meal_Preparation";
  auto result = canonicalize_labels(std::move(instances), map);
  REQUIRE(result.instances.size() == 3);
  CHECK(result.counts_per_label["Meal_Preparation"] == 2);
  CHECK(result.counts_per_label["Sleeping"] == 1);
  CHECK(result.counts_per_label.count("Resperate") == 0);
}

TEST_CASE("merge map rejects rows without two fields", "[casas][merge]") {
  testutil::TempDir tmp("mergebad");
  testutil::write_file(tmp / "map.csv", "Wash_Dishes\n");
  CHECK_THROWS_AS(LabelMergeMap::load((tmp / "map.csv").string()), Error);
}
