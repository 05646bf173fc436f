// SPDX-License-Identifier: Apache-2.0
#include "cminer/constructs.hpp"

#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace cminer;

namespace {

std::vector<std::string> names_of(const std::vector<Construct>& constructs) {
  std::vector<std::string> out;
  for (const auto& c : constructs) out.push_back(c.name);
  return out;
}

}  // namespace

TEST_CASE("numbered semicolon list parses in order", "[constructs][parse]") {
  auto list = parse_construct_list(
      "1. Gathering ingredients; 2. Preparing ingredients (e.g., chopping, slicing, dicing); "
      "3. Cooking ingredients (e.g., boiling, frying, baking); 4. Setting the table; "
      "5. Serving the meal");
  REQUIRE(list.size() == 5);
  CHECK(names_of(list) == std::vector<std::string>{"Gathering ingredients", "Preparing ingredients",
                                                   "Cooking ingredients", "Setting the table",
                                                   "Serving the meal"});
  CHECK(list[0].detail.empty());
  CHECK(list[1].detail == "e.g., chopping, slicing, dicing");
  CHECK(list[2].detail == "e.g., boiling, frying, baking");
  for (std::size_t i = 0; i < list.size(); ++i) CHECK(list[i].index == i + 1);
}

TEST_CASE("enumerator without a space still starts an item", "[constructs][parse]") {
  auto list = parse_construct_list("1. Food preparation; 2.Cooking; 3. Eating; 4.Cleaning up");
  CHECK(names_of(list) ==
        std::vector<std::string>{"Food preparation", "Cooking", "Eating", "Cleaning up"});
}

TEST_CASE("items may continue on a new line", "[constructs][parse]") {
  auto list = parse_construct_list(
      "1. Getting out of bed; 2. Walking to the toilet; 3. Using the toilet\n"
      "4. Walking back to bed or starting the day");
  CHECK(names_of(list) ==
        std::vector<std::string>{"Getting out of bed", "Walking to the toilet", "Using the toilet",
                                 "Walking back to bed or starting the day"});
}

TEST_CASE("unnumbered fragment on a list line is kept", "[constructs][parse]") {
  auto list = parse_construct_list(
      "1. Preparing Food; 2. Cleaning; Other kitchen tasks (getting food; groceries; meals)");
  REQUIRE(list.size() == 3);
  CHECK(list[2].name == "Other kitchen tasks");
  CHECK(list[2].detail == "getting food; groceries; meals");
}

TEST_CASE("semicolons inside parentheses do not split items", "[constructs][parse]") {
  auto list = parse_construct_list(
      "1. Sleeping(periods of no movement, interspersed with periods of movement. The temperature "
      "readings remain relatively stable throughout); 2. Movement (motion sensor activity;  moving "
      "around in the area between the living room and home entrance aisle); 3. Rest(associated "
      "with the periods of no movement)");
  REQUIRE(list.size() == 3);
  CHECK(names_of(list) == std::vector<std::string>{"Sleeping", "Movement", "Rest"});
  CHECK(list[1].detail ==
        "motion sensor activity;  moving around in the area between the living room and home "
        "entrance aisle");
}

TEST_CASE("bulleted lists parse", "[constructs][parse]") {
  auto list = parse_construct_list("- one thing\n* two thing\n\xE2\x80\xA2 three thing");
  CHECK(names_of(list) == std::vector<std::string>{"one thing", "two thing", "three thing"});
}

TEST_CASE("paren enumerators parse", "[constructs][parse]") {
  auto list = parse_construct_list("1) Alpha; 2) Beta");
  CHECK(names_of(list) == std::vector<std::string>{"Alpha", "Beta"});
}

TEST_CASE("prose lines around the list are skipped", "[constructs][parse]") {
  auto list = parse_construct_list(
      "Sure, the sub-actions are:\n1. One step; 2. Two step\nLet me know if that helps.");
  CHECK(names_of(list) == std::vector<std::string>{"One step", "Two step"});
}

TEST_CASE("trailing comma before a detail is dropped from the name", "[constructs][parse]") {
  auto list = parse_construct_list("1. Gathering, (collecting items)");
  REQUIRE(list.size() == 1);
  CHECK(list[0].name == "Gathering");
  CHECK(list[0].detail == "collecting items");
}

TEST_CASE("mid-item parenthetical stays in the name", "[constructs][parse]") {
  auto list = parse_construct_list("1. Open (front) door; 2. Step inside");
  CHECK(list[0].name == "Open (front) door");
  CHECK(list[0].detail.empty());
}

TEST_CASE("item that is only a parenthetical keeps its text as the name", "[constructs][parse]") {
  auto list = parse_construct_list("1. (just an aside)");
  REQUIRE(list.size() == 1);
  CHECK(list[0].name == "(just an aside)");
  CHECK(list[0].detail.empty());
}

TEST_CASE("empty fragments are skipped", "[constructs][parse]") {
  auto list = parse_construct_list("1. One;; 2. Two; ");
  CHECK(names_of(list) == std::vector<std::string>{"One", "Two"});
}

TEST_CASE("response without a list throws", "[constructs][parse]") {
  CHECK_THROWS_AS(parse_construct_list("No list here, just prose.", "Relax"), NoConstructsFound);
  CHECK_THROWS_AS(parse_construct_list("", "Relax"), NoConstructsFound);
  CHECK_THROWS_AS(parse_construct_list("\n\n", "Relax"), NoConstructsFound);
}

TEST_CASE("marker lexicon loads versioned file", "[constructs][markers]") {
  testutil::TempDir dir("markers");
  auto path = (dir / "markers.txt").string();
  testutil::write_file(path, "# markers-v1\n# comment line\nthen\nfollowed by\n\nback to\n");
  auto lex = MarkerLexicon::load(path);
  CHECK(lex.version == "markers-v1");
  CHECK(lex.markers == std::vector<std::string>{"then", "followed by", "back to"});
}

TEST_CASE("marker lexicon without entries throws", "[constructs][markers]") {
  testutil::TempDir dir("markers-empty");
  auto path = (dir / "empty.txt").string();
  testutil::write_file(path, "# markers-v1\n");
  CHECK_THROWS_AS(MarkerLexicon::load(path), Error);
  CHECK_THROWS_AS(MarkerLexicon::load((dir / "missing.txt").string()), Error);
}

TEST_CASE("default marker lexicon is versioned", "[constructs][markers]") {
  const auto& lex = default_marker_lexicon();
  CHECK(lex.version == kMarkerLexiconVersion);
  CHECK(lex.markers.size() == 13);
}

TEST_CASE("single construct is an event regardless of markers", "[constructs][categorize]") {
  auto one = parse_construct_list("1. Sleeping");
  CHECK(categorize(one, "first this and then that", "1. Sleeping") == Category::Event);
}

TEST_CASE("marker in the summary makes an action", "[constructs][categorize]") {
  auto list = parse_construct_list("1. Sitting; 2. Walking");
  CHECK(categorize(list, "the resident sat and then walked", "1. Sitting; 2. Walking") ==
        Category::Action);
  CHECK(categorize(list, "the resident sat and walked", "1. Sitting; 2. Walking") ==
        Category::Event);
}

TEST_CASE("marker in the response alone makes an action", "[constructs][categorize]") {
  auto list = parse_construct_list("1. Get up; 2. Walk back to bed");
  CHECK(categorize(list, "movement at night", "1. Get up; 2. Walk back to bed") ==
        Category::Action);
}

TEST_CASE("capitalized marker words do not count", "[constructs][categorize]") {
  auto list = parse_construct_list("1. Go to bed; 2. Sleep");
  CHECK(categorize(list, "night movement in the bedroom", "1. Go to bed; 2. Sleep") ==
        Category::Event);
}

TEST_CASE("markers broken across lines still match", "[constructs][categorize]") {
  auto list = parse_construct_list("1. One; 2. Two");
  CHECK(categorize(list, "door opening followed\nby motion", "1. One; 2. Two") ==
        Category::Action);
}

TEST_CASE("suffix stripping", "[constructs][stem]") {
  CHECK(detail::stem("walking") == "walk");
  CHECK(detail::stem("Walking") == "walk");
  CHECK(detail::stem("prepared") == "prepar");
  CHECK(detail::stem("ingredients") == "ingredient");
  CHECK(detail::stem("dogs") == "dog");
  CHECK(detail::stem("sing") == "sing");
  CHECK(detail::stem("bed") == "bed");
  CHECK(detail::stem("was") == "was");
  CHECK(detail::stem("ed") == "ed");
}

TEST_CASE("stem sets keep function words and drop discourse noise", "[constructs][stem]") {
  auto stems = detail::stem_set("Walking to the toilet");
  CHECK(stems == std::set<std::string>{"walk", "to", "the", "toilet"});
  CHECK(detail::stem_set("eg ie etc toilet") == std::set<std::string>{"toilet"});
}

TEST_CASE("relevance score counts stem overlap", "[constructs][relevance]") {
  ActivityLexicon lexicon{"Bed_to_Toilet", {"bed", "toilet", "bathroom", "walk"}};
  Construct c;
  c.name = "Walking to the toilet";
  CHECK(score_relevance(c, lexicon) == 0.5);

  Construct all;
  all.name = "toilet walk";
  CHECK(score_relevance(all, lexicon) == 1.0);

  Construct none;
  none.name = "Preparing Food";
  CHECK(score_relevance(none, lexicon) == 0.0);

  Construct punct;
  punct.name = "...";
  CHECK(score_relevance(punct, lexicon) == 0.0);
}

TEST_CASE("detail text contributes to the score", "[constructs][relevance]") {
  ActivityLexicon lexicon{"Bed_to_Toilet", {"toilet"}};
  Construct c;
  c.name = "Movement";
  c.detail = "toilet";
  CHECK(score_relevance(c, lexicon) == 0.5);
}

TEST_CASE("empty lexicon throws", "[constructs][relevance]") {
  ActivityLexicon lexicon{"Relax", {}};
  Construct c;
  c.name = "Sitting";
  CHECK_THROWS_AS(score_relevance(c, lexicon), EmptyLexicon);
}

TEST_CASE("activity lexicon pulls stems from label and locations", "[constructs][relevance]") {
  LocationMap locations;
  locations.mapping["M004"] = "Bedroom";
  locations.mapping["M005"] = "walk-in closet";
  auto lexicon = make_activity_lexicon("Bed_to_Toilet", locations);
  CHECK(lexicon.activity_label == "Bed_to_Toilet");
  CHECK(lexicon.keywords.count("bed") == 1);
  CHECK(lexicon.keywords.count("toilet") == 1);
  CHECK(lexicon.keywords.count("motion") == 1);
  CHECK(lexicon.keywords.count("door") == 1);
  CHECK(lexicon.keywords.count("temperature") == 1);
  CHECK(lexicon.keywords.count("sensor") == 1);
  CHECK(lexicon.keywords.count("bedroom") == 1);
  CHECK(lexicon.keywords.count("walk") == 1);
  CHECK(lexicon.keywords.count("closet") == 1);

  Construct c;
  c.name = "Walking to the toilet";
  CHECK(score_relevance(c, lexicon) == 0.75);
}

TEST_CASE("scoring flags constructs under the threshold", "[constructs][relevance]") {
  ActivityLexicon lexicon{"Bed_to_Toilet", {"bed", "toilet", "bathroom", "walk"}};
  ConstructSet set;
  set.activity_label = "Bed_to_Toilet";
  set.constructs = parse_construct_list("1. Walking to the toilet; 2. Preparing Food");
  score_constructs(set, lexicon);
  CHECK(set.constructs[0].relevance == Relevance::Relevant);
  CHECK(set.constructs[0].relevance_score == 0.5);
  CHECK(set.constructs[1].relevance == Relevance::Irrelevant);
  CHECK(set.constructs[1].relevance_score == 0.0);
}

TEST_CASE("score equal to the threshold is relevant", "[constructs][relevance]") {
  ActivityLexicon lexicon{"X", {"toilet"}};
  ConstructSet set;
  set.constructs = parse_construct_list("1. alpha beta gamma delta toilet");
  score_constructs(set, lexicon);
  CHECK(set.constructs[0].relevance_score == 0.2);
  CHECK(set.constructs[0].relevance == Relevance::Relevant);
}

namespace {

ConstructSet reviewed_set() {
  ConstructSet set;
  set.activity_label = "Relax";
  set.category = Category::Event;
  set.constructs = parse_construct_list("1. Sitting; 2. Walking; 3. Napping");
  set.provenance.summary_fingerprint = {"openai", "gpt-4", "aaaa"};
  set.provenance.querier_fingerprint = {"google", "gemini-pro", "bbbb"};
  return set;
}

}  // namespace

TEST_CASE("dropping a construct reindexes survivors", "[constructs][review]") {
  auto set = reviewed_set();
  ReviewDecision decision;
  decision.drop = {2};
  auto out = apply_review(set, decision);
  REQUIRE(out.constructs.size() == 2);
  CHECK(out.constructs[0].name == "Sitting");
  CHECK(out.constructs[0].index == 1);
  CHECK(out.constructs[1].name == "Napping");
  CHECK(out.constructs[1].index == 2);
  CHECK(out.review_state == ReviewState::Edited);
  CHECK(out.provenance.summary_fingerprint.prompt_hash == "aaaa");
  CHECK(out.provenance.querier_fingerprint.prompt_hash == "bbbb");
}

TEST_CASE("empty decision confirms the set", "[constructs][review]") {
  auto set = reviewed_set();
  auto out = apply_review(set, {});
  CHECK(out.constructs == set.constructs);
  CHECK(out.category == set.category);
  CHECK(out.review_state == ReviewState::Confirmed);

  auto again = apply_review(out, {});
  CHECK(again.constructs == set.constructs);
  CHECK(again.review_state == ReviewState::Confirmed);
}

TEST_CASE("count confirmation must match the machine set", "[constructs][review]") {
  auto set = reviewed_set();
  ReviewDecision ok;
  ok.confirm_count = 3;
  CHECK(apply_review(set, ok).review_state == ReviewState::Confirmed);

  ReviewDecision stale;
  stale.confirm_count = 2;
  CHECK_THROWS_AS(apply_review(set, stale), CountMismatch);
}

TEST_CASE("drop indices are validated", "[constructs][review]") {
  auto set = reviewed_set();
  ReviewDecision zero;
  zero.drop = {0};
  CHECK_THROWS_AS(apply_review(set, zero), IndexOutOfRange);
  ReviewDecision high;
  high.drop = {4};
  CHECK_THROWS_AS(apply_review(set, high), IndexOutOfRange);
}

TEST_CASE("duplicate drop indices collapse", "[constructs][review]") {
  auto set = reviewed_set();
  ReviewDecision decision;
  decision.drop = {2, 2};
  auto out = apply_review(set, decision);
  CHECK(out.constructs.size() == 2);
  CHECK(out.review_state == ReviewState::Edited);
}

TEST_CASE("category override marks the set edited only when it changes", "[constructs][review]") {
  auto set = reviewed_set();
  ReviewDecision flip;
  flip.category_override = Category::Action;
  auto flipped = apply_review(set, flip);
  CHECK(flipped.category == Category::Action);
  CHECK(flipped.review_state == ReviewState::Edited);

  ReviewDecision same;
  same.category_override = Category::Event;
  auto confirmed = apply_review(set, same);
  CHECK(confirmed.category == Category::Event);
  CHECK(confirmed.review_state == ReviewState::Confirmed);
}

namespace {

struct ExpectedRow {
  std::string label;
  Category category = Category::Event;
  std::vector<std::string> names;
};

struct FixtureCheck {
  std::size_t rows = 0;
  std::size_t category_hits = 0;
};

FixtureCheck check_dataset(const std::string& fixture_path, const std::string& expected_path) {
  auto fixtures = nlohmann::json::parse(testutil::read_file(fixture_path));
  auto expected = nlohmann::json::parse(testutil::read_file(expected_path));

  FixtureCheck result;
  for (const auto& row : expected["activities"]) {
    ExpectedRow want;
    want.label = row["label"].get<std::string>();
    want.category =
        row["category"].get<std::string>() == "Action" ? Category::Action : Category::Event;
    for (const auto& n : row["names"]) want.names.push_back(n.get<std::string>());

    INFO(fixture_path << ": " << want.label);
    REQUIRE(fixtures.contains(want.label));
    const auto& entry = fixtures[want.label];
    auto summary = entry["summary_text"].get<std::string>();
    auto response = entry["construct_response_text"].get<std::string>();
    REQUIRE_FALSE(summary.empty());

    auto constructs = parse_construct_list(response, want.label);
    CHECK(names_of(constructs) == want.names);
    ++result.rows;
    if (categorize(constructs, summary, response) == want.category) ++result.category_hits;
  }
  for (const auto& label : expected["no_summary"]) {
    const auto& entry = fixtures[label.get<std::string>()];
    CHECK(entry["summary_text"].get<std::string>().empty());
  }
  return result;
}

}  // namespace

TEST_CASE("fixture datasets match the reference tables", "[constructs][fixtures]") {
  auto root = testutil::repo_dir();
  auto aruba = check_dataset((root / "data/fixtures/aruba.json").string(),
                             (testutil::test_data_dir() / "expected/aruba_table.json").string());
  auto milan = check_dataset((root / "data/fixtures/milan.json").string(),
                             (testutil::test_data_dir() / "expected/milan_table.json").string());
  CHECK(aruba.rows == 8);
  CHECK(milan.rows == 13);
  CHECK(aruba.category_hits + milan.category_hits == 21);
}
