// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cminer/errors.hpp"
#include "cminer/gateway.hpp"
#include "cminer/locations.hpp"
#include "cminer/strings.hpp"
#include "cminer/version.hpp"

namespace cminer {

enum class Relevance { Relevant, Irrelevant, Unreviewed };
enum class Category { Event, Action };
enum class ReviewState { Machine, Confirmed, Edited };

inline std::string_view to_string(Relevance r) {
  switch (r) {
    case Relevance::Relevant: return "relevant";
    case Relevance::Irrelevant: return "irrelevant";
    case Relevance::Unreviewed: return "unreviewed";
  }
  return "?";
}

inline std::string_view to_string(Category c) {
  return c == Category::Event ? "Event" : "Action";
}

inline std::string_view to_string(ReviewState s) {
  switch (s) {
    case ReviewState::Machine: return "machine";
    case ReviewState::Confirmed: return "confirmed";
    case ReviewState::Edited: return "edited";
  }
  return "?";
}

struct Construct {
  std::size_t index = 0;  // 1-based position in its set
  std::string name;
  std::string detail;
  Relevance relevance = Relevance::Unreviewed;
  double relevance_score = 0.0;

  bool operator==(const Construct&) const = default;
};

struct ConstructProvenance {
  ProviderFingerprint summary_fingerprint;
  ProviderFingerprint querier_fingerprint;
};

struct ConstructSet {
  std::string activity_label;
  Category category = Category::Event;
  std::vector<Construct> constructs;
  ConstructProvenance provenance;
  ReviewState review_state = ReviewState::Machine;
};

class NoConstructsFound : public Error {
 public:
  explicit NoConstructsFound(const std::string& label)
      : Error("response contains no construct list for '" + label + "'") {}
};

class EmptyLexicon : public Error {
 public:
  explicit EmptyLexicon(const std::string& label)
      : Error("activity lexicon is empty for '" + label + "'") {}
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t size)
      : Error("construct index " + std::to_string(index) + " out of range 1.." +
              std::to_string(size)) {}
};

class CountMismatch : public Error {
 public:
  CountMismatch(std::size_t confirmed, std::size_t actual)
      : Error("reviewer confirmed " + std::to_string(confirmed) + " constructs, set has " +
              std::to_string(actual)) {}
};

namespace detail {

inline bool is_bullet(std::string_view fragment) {
  if (strings::starts_with(fragment, "- ") || strings::starts_with(fragment, "* ")) return true;
  return strings::starts_with(fragment, "\xE2\x80\xA2");  // U+2022
}

// N. or N) enumerator prefix; returns its length, 0 when absent.
inline std::size_t enumerator_len(std::string_view fragment) {
  std::size_t i = 0;
  while (i < fragment.size() && fragment[i] >= '0' && fragment[i] <= '9') ++i;
  if (i == 0 || i >= fragment.size()) return 0;
  if (fragment[i] != '.' && fragment[i] != ')') return 0;
  return i + 1;
}

inline std::string_view strip_item_prefix(std::string_view fragment) {
  fragment = strings::trim(fragment);
  if (auto n = enumerator_len(fragment)) return strings::trim(fragment.substr(n));
  if (strings::starts_with(fragment, "- ") || strings::starts_with(fragment, "* ")) {
    return strings::trim(fragment.substr(2));
  }
  if (strings::starts_with(fragment, "\xE2\x80\xA2")) return strings::trim(fragment.substr(3));
  return fragment;
}

// Splits on ';' at parenthesis depth zero only.
inline std::vector<std::string_view> split_top_level(std::string_view line) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || (line[i] == ';' && depth == 0)) {
      parts.push_back(line.substr(start, i - start));
      start = i + 1;
      continue;
    }
    if (line[i] == '(') ++depth;
    if (line[i] == ')' && depth > 0) --depth;
  }
  return parts;
}

// A trailing balanced parenthetical becomes the detail text.
inline Construct to_construct(std::string_view item) {
  Construct c;
  item = strings::trim(item);
  if (!item.empty() && item.back() == ')') {
    int depth = 0;
    std::size_t open = std::string_view::npos;
    for (std::size_t i = item.size(); i-- > 0;) {
      if (item[i] == ')') ++depth;
      if (item[i] == '(') {
        if (--depth == 0) {
          open = i;
          break;
        }
      }
    }
    if (open != std::string_view::npos && open > 0) {
      std::string_view name = strings::trim(item.substr(0, open));
      if (!name.empty() && name.back() == ',') name = strings::trim(name.substr(0, name.size() - 1));
      if (!name.empty()) {
        c.name = std::string(name);
        c.detail = std::string(strings::trim(item.substr(open + 1, item.size() - open - 2)));
        return c;
      }
    }
  }
  c.name = std::string(item);
  return c;
}

}  // namespace detail

// Pulls the ordered item list out of a querier response. A line carries items
// when its first top-level fragment opens with an enumerator (N. or N)) or a
// bullet; every non-empty fragment of such a line is an item, so unnumbered
// continuations after semicolons are kept. Other lines are prose and skipped.
inline std::vector<Construct> parse_construct_list(std::string_view response,
                                                   const std::string& label = "") {
  std::vector<Construct> constructs;
  std::size_t start = 0;
  while (start <= response.size()) {
    std::size_t end = response.find('\n', start);
    std::string_view line = response.substr(
        start, end == std::string_view::npos ? std::string_view::npos : end - start);
    auto fragments = detail::split_top_level(line);
    std::string_view head = strings::trim(fragments.empty() ? std::string_view{} : fragments[0]);
    bool qualifies = detail::enumerator_len(head) > 0 || detail::is_bullet(head);
    if (qualifies) {
      for (auto fragment : fragments) {
        auto item = detail::strip_item_prefix(fragment);
        if (item.empty()) continue;
        auto construct = detail::to_construct(item);
        if (construct.name.empty()) continue;
        construct.index = constructs.size() + 1;
        constructs.push_back(std::move(construct));
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (constructs.empty()) throw NoConstructsFound(label);
  return constructs;
}

// Sequence markers that indicate an ordered (action-based) description.
// Matching is case-sensitive over lowercase markers on purpose: a marker word
// capitalized as the first word of a list item ("Go to bed") names a step, it
// does not connect two steps, and must not flip the whole set to Action.
struct MarkerLexicon {
  std::string version;
  std::vector<std::string> markers;

  static MarkerLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open marker lexicon: " + path);
    MarkerLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
      auto trimmed = strings::trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '#') {
        if (lex.version.empty()) {
          auto rest = strings::trim(trimmed.substr(1));
          if (!rest.empty()) lex.version = std::string(rest);
        }
        continue;
      }
      lex.markers.emplace_back(trimmed);
    }
    if (lex.markers.empty()) throw Error("marker lexicon has no entries: " + path);
    return lex;
  }
};

inline const MarkerLexicon& default_marker_lexicon() {
  static const MarkerLexicon lexicon{
      std::string(kMarkerLexiconVersion),
      {"then", "followed by", "back to", "returning", "after", "finally", "walk to", "go to",
       "getting out", "exiting", "entering", "moving to", "in and out"}};
  return lexicon;
}

// Action iff the set has an orderable plurality (>= 2 constructs) and the
// summary or response carries a sequence marker; Event otherwise.
inline Category categorize(std::span<const Construct> constructs, std::string_view summary_text,
                           std::string_view response_text,
                           const MarkerLexicon& markers = default_marker_lexicon()) {
  if (constructs.size() < 2) return Category::Event;
  const std::string haystack =
      strings::normalize_ws(summary_text) + " " + strings::normalize_ws(response_text);
  for (const auto& marker : markers.markers) {
    if (strings::contains(haystack, marker)) return Category::Action;
  }
  return Category::Event;
}

struct ActivityLexicon {
  std::string activity_label;
  std::set<std::string> keywords;  // lowercase stems
};

namespace detail {

inline bool is_stop_word(std::string_view word) {
  // discourse noise only; function words count as stems on purpose
  return word == "eg" || word == "ie" || word == "etc";
}

inline std::string stem(std::string_view word) {
  std::string w = strings::to_lower(word);
  if (w.size() > 4 && w.compare(w.size() - 3, 3, "ing") == 0) {
    w.resize(w.size() - 3);
  } else if (w.size() > 3 && w.compare(w.size() - 2, 2, "ed") == 0) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && w.back() == 's') {
    w.pop_back();
  }
  return w;
}

// lowercase, strip punctuation to spaces, drop stop words, suffix-strip
inline std::set<std::string> stem_set(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cleaned.push_back(c);
    } else {
      cleaned.push_back(' ');
    }
  }
  std::set<std::string> stems;
  for (auto token : strings::split_ws(cleaned)) {
    auto lowered = strings::to_lower(token);
    if (is_stop_word(lowered)) continue;
    auto stemmed = stem(lowered);
    if (!stemmed.empty()) stems.insert(std::move(stemmed));
  }
  return stems;
}

}  // namespace detail

// Keywords from the activity name parts, the mapped location phrases, and the
// sensor kind words, all stemmed like construct text is.
inline ActivityLexicon make_activity_lexicon(const std::string& label,
                                             const LocationMap& locations) {
  ActivityLexicon lexicon;
  lexicon.activity_label = label;
  std::string corpus = label + " motion door temperature sensor";
  for (const auto& [id, phrase] : locations.mapping) {
    corpus += " ";
    corpus += phrase;
  }
  lexicon.keywords = detail::stem_set(corpus);
  return lexicon;
}

// |stems(name + detail) ∩ keywords| / |stems(name + detail)|.
inline double score_relevance(const Construct& construct, const ActivityLexicon& lexicon) {
  if (lexicon.keywords.empty()) throw EmptyLexicon(lexicon.activity_label);
  auto stems = detail::stem_set(construct.name + " " + construct.detail);
  if (stems.empty()) return 0.0;
  std::size_t matched = 0;
  for (const auto& s : stems) {
    if (lexicon.keywords.count(s)) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(stems.size());
}

struct RelevanceConfig {
  double threshold = 0.2;
};

// Scores every construct in place and flags those under the threshold.
inline void score_constructs(ConstructSet& set, const ActivityLexicon& lexicon,
                             const RelevanceConfig& config = {}) {
  for (auto& construct : set.constructs) {
    construct.relevance_score = score_relevance(construct, lexicon);
    construct.relevance =
        construct.relevance_score < config.threshold ? Relevance::Irrelevant : Relevance::Relevant;
  }
}

struct ReviewDecision {
  std::vector<std::size_t> drop;  // 1-based indices into the machine set
  std::optional<Category> category_override;
  std::optional<std::size_t> confirm_count;  // expected machine construct count
};

// Applies one reviewer decision: validates the count confirmation against the
// pre-review set, drops by original index, compacts indices, applies the
// category override. Any change marks the set edited; none marks it confirmed.
inline ConstructSet apply_review(const ConstructSet& set, const ReviewDecision& decision) {
  if (decision.confirm_count && *decision.confirm_count != set.constructs.size()) {
    throw CountMismatch(*decision.confirm_count, set.constructs.size());
  }
  std::set<std::size_t> drop;
  for (std::size_t index : decision.drop) {
    if (index < 1 || index > set.constructs.size()) {
      throw IndexOutOfRange(index, set.constructs.size());
    }
    drop.insert(index);
  }

  ConstructSet out = set;
  out.constructs.clear();
  for (const auto& construct : set.constructs) {
    if (drop.count(construct.index)) continue;
    auto kept = construct;
    kept.index = out.constructs.size() + 1;
    out.constructs.push_back(std::move(kept));
  }

  bool edited = !drop.empty();
  if (decision.category_override && *decision.category_override != set.category) {
    out.category = *decision.category_override;
    edited = true;
  }
  out.review_state = edited ? ReviewState::Edited : ReviewState::Confirmed;
  return out;
}

}  // namespace cminer
