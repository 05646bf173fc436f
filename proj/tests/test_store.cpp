// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "cminer/store.hpp"

#include "test_util.hpp"

using namespace cminer;

namespace {

ConstructSet sample_set(const std::string& label) {
  ConstructSet set;
  set.activity_label = label;
  set.category = Category::Action;
  set.constructs = {
      {1, "Entering the kitchen", "", Relevance::Relevant, 0.5},
      {2, "Cooking", "use of the stove", Relevance::Irrelevant, 0.1},
  };
  set.provenance.summary_fingerprint = {"openai", "gpt-4", "aa11"};
  set.provenance.querier_fingerprint = {"google", "gemini-pro", "bb22"};
  set.review_state = ReviewState::Machine;
  return set;
}

}  // namespace

TEST_CASE("jsonl append and read round-trip", "[store][jsonl]") {
  testutil::TempDir dir("jsonl");
  const auto path = dir / "records.jsonl";
  jsonl::append(path, {{"a", 1}});
  jsonl::append(path, {{"b", "two"}});

  auto records = jsonl::read(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0]["a"] == 1);
  CHECK(records[1]["b"] == "two");
}

TEST_CASE("jsonl read skips blank lines and reports bad records by line", "[store][jsonl]") {
  testutil::TempDir dir("jsonl-bad");
  const auto path = dir / "records.jsonl";
  testutil::write_file(path, "{\"ok\":1}\n\n{not json}\n");
  try {
    jsonl::read(path);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("jsonl append creates parent directories", "[store][jsonl]") {
  testutil::TempDir dir("jsonl-mkdir");
  const auto path = dir / "nested" / "deep" / "records.jsonl";
  jsonl::append(path, {{"x", true}});
  CHECK(jsonl::read(path).size() == 1);
}

TEST_CASE("construct set survives a serialization round-trip", "[store][serialize]") {
  const auto set = sample_set("Kitchen_Activity");
  const auto restored = construct_set_from_json(construct_set_to_json(set));

  CHECK(restored.activity_label == set.activity_label);
  CHECK(restored.category == set.category);
  CHECK(restored.review_state == set.review_state);
  REQUIRE(restored.constructs.size() == 2);
  CHECK(restored.constructs[0] == set.constructs[0]);
  CHECK(restored.constructs[1] == set.constructs[1]);
  CHECK(restored.provenance.summary_fingerprint == set.provenance.summary_fingerprint);
  CHECK(restored.provenance.querier_fingerprint == set.provenance.querier_fingerprint);
}

TEST_CASE("identical sets serialize to identical bytes", "[store][serialize]") {
  const auto a = construct_set_to_json(sample_set("Relax")).dump();
  const auto b = construct_set_to_json(sample_set("Relax")).dump();
  CHECK(a == b);
}

TEST_CASE("enum parsers reject unknown tokens", "[store][serialize]") {
  CHECK_THROWS_AS(category_from_string("event"), Error);
  CHECK_THROWS_AS(relevance_from_string("Relevant"), Error);
  CHECK_THROWS_AS(review_state_from_string("Machine"), Error);
  CHECK(category_from_string("Action") == Category::Action);
  CHECK(relevance_from_string("irrelevant") == Relevance::Irrelevant);
  CHECK(review_state_from_string("edited") == ReviewState::Edited);
}

TEST_CASE("summary survives a serialization round-trip", "[store][serialize]") {
  ActivitySummary summary;
  summary.activity_label = "Sleeping";
  summary.text = "The resident sleeps through the night.";
  summary.source_instance_refs = {"sleeping-0001", "sleeping-0002"};
  summary.fingerprint = {"openai", "gpt-4", "cc33"};

  const auto restored = summary_from_json(summary_to_json(summary));
  CHECK(restored.activity_label == summary.activity_label);
  CHECK(restored.text == summary.text);
  CHECK(restored.source_instance_refs == summary.source_instance_refs);
  CHECK(restored.fingerprint == summary.fingerprint);
}

TEST_CASE("paragraph survives a serialization round-trip", "[store][serialize]") {
  InstanceParagraph paragraph;
  paragraph.activity_label = "Work";
  paragraph.text = "Motion sensor in the Office fired.";
  paragraph.sentence_count = 1;
  paragraph.instance_ref = "work-0007";

  const auto restored = paragraph_from_json(paragraph_to_json(paragraph));
  CHECK(restored.activity_label == paragraph.activity_label);
  CHECK(restored.text == paragraph.text);
  CHECK(restored.sentence_count == paragraph.sentence_count);
  CHECK(restored.instance_ref == paragraph.instance_ref);
}

TEST_CASE("construct store assigns increasing revisions per activity", "[store]") {
  testutil::TempDir dir("store-rev");
  ConstructStore store(dir / "constructs.jsonl");
  CHECK(store.empty());

  CHECK(store.append(sample_set("A")) == 1);
  CHECK(store.append(sample_set("B")) == 1);
  CHECK(store.append(sample_set("A")) == 2);

  REQUIRE(store.latest().count("A") == 1);
  CHECK(store.latest().at("A").revision == 2);
  CHECK(store.latest().at("B").revision == 1);
}

TEST_CASE("construct store reload keeps the highest revision and continues it", "[store]") {
  testutil::TempDir dir("store-reload");
  const auto path = dir / "constructs.jsonl";
  {
    ConstructStore store(path);
    auto v1 = sample_set("Relax");
    store.append(v1);
    auto v2 = sample_set("Relax");
    v2.review_state = ReviewState::Confirmed;
    store.append(v2);
  }

  ConstructStore reloaded(path);
  REQUIRE(reloaded.latest().count("Relax") == 1);
  CHECK(reloaded.latest().at("Relax").revision == 2);
  CHECK(reloaded.latest().at("Relax").set.review_state == ReviewState::Confirmed);
  CHECK(reloaded.append(sample_set("Relax")) == 3);

  // the file keeps every revision; only the view collapses to latest
  CHECK(jsonl::read(path).size() == 3);
}

TEST_CASE("decision log round-trips entries in order", "[store][decisions]") {
  testutil::TempDir dir("decisions");
  const auto path = dir / "decisions.jsonl";

  DecisionLogEntry first;
  first.activity_label = "Relax";
  first.revision = 1;
  first.kept = {0, 2};
  first.note = "dropped the generic one";
  first.timestamp = "2026-08-21T10:00:00Z";
  append_decision(path, first);

  DecisionLogEntry second;
  second.activity_label = "Leave_Home";
  second.revision = 2;
  second.kept = {0};
  second.category_override = Category::Action;
  second.timestamp = "2026-08-21T10:01:00Z";
  append_decision(path, second);

  auto entries = read_decisions(path);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].activity_label == "Relax");
  CHECK(entries[0].kept == std::vector<std::size_t>{0, 2});
  CHECK_FALSE(entries[0].category_override.has_value());
  CHECK(entries[0].note == "dropped the generic one");
  CHECK(entries[1].activity_label == "Leave_Home");
  REQUIRE(entries[1].category_override.has_value());
  CHECK(*entries[1].category_override == Category::Action);
  CHECK(entries[1].timestamp == "2026-08-21T10:01:00Z");
}
