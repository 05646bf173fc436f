// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cminer/casas.hpp"
#include "cminer/constructs.hpp"
#include "cminer/errors.hpp"
#include "cminer/gateway.hpp"
#include "cminer/textualizer.hpp"
#include "cminer/timestamp.hpp"

namespace cminer {

inline Category category_from_string(std::string_view text) {
  if (text == "Event") return Category::Event;
  if (text == "Action") return Category::Action;
  throw Error("unknown category '" + std::string(text) + "'");
}

inline Relevance relevance_from_string(std::string_view text) {
  if (text == "relevant") return Relevance::Relevant;
  if (text == "irrelevant") return Relevance::Irrelevant;
  if (text == "unreviewed") return Relevance::Unreviewed;
  throw Error("unknown relevance '" + std::string(text) + "'");
}

inline ReviewState review_state_from_string(std::string_view text) {
  if (text == "machine") return ReviewState::Machine;
  if (text == "confirmed") return ReviewState::Confirmed;
  if (text == "edited") return ReviewState::Edited;
  throw Error("unknown review state '" + std::string(text) + "'");
}

// Line-delimited record files. nlohmann orders object keys, so identical
// records serialize to identical bytes.
namespace jsonl {

inline void append(const std::filesystem::path& path, const nlohmann::json& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open for append: " + path.string());
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

inline std::vector<nlohmann::json> read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::vector<nlohmann::json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strings::trim(line).empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad record at " + path.string() + ":" + std::to_string(line_no) + ": " +
                  e.what());
    }
  }
  return records;
}

}  // namespace jsonl

inline nlohmann::json fingerprint_to_json(const ProviderFingerprint& fp) {
  return {{"provider", fp.provider}, {"model", fp.model}, {"prompt_hash", fp.prompt_hash}};
}

inline ProviderFingerprint fingerprint_from_json(const nlohmann::json& doc) {
  return {doc.value("provider", ""), doc.value("model", ""), doc.value("prompt_hash", "")};
}

inline nlohmann::json construct_set_to_json(const ConstructSet& set) {
  nlohmann::json constructs = nlohmann::json::array();
  for (const auto& c : set.constructs) {
    constructs.push_back({{"index", c.index},
                          {"name", c.name},
                          {"detail", c.detail},
                          {"relevance", std::string(to_string(c.relevance))},
                          {"relevance_score", c.relevance_score}});
  }
  return {{"activity_label", set.activity_label},
          {"category", std::string(to_string(set.category))},
          {"constructs", std::move(constructs)},
          {"provenance",
           {{"summary", fingerprint_to_json(set.provenance.summary_fingerprint)},
            {"querier", fingerprint_to_json(set.provenance.querier_fingerprint)}}},
          {"review_state", std::string(to_string(set.review_state))}};
}

inline ConstructSet construct_set_from_json(const nlohmann::json& doc) {
  ConstructSet set;
  set.activity_label = doc.at("activity_label").get<std::string>();
  set.category = category_from_string(doc.at("category").get<std::string>());
  set.review_state = review_state_from_string(doc.at("review_state").get<std::string>());
  for (const auto& c : doc.at("constructs")) {
    Construct construct;
    construct.index = c.at("index").get<std::size_t>();
    construct.name = c.at("name").get<std::string>();
    construct.detail = c.value("detail", "");
    construct.relevance = relevance_from_string(c.value("relevance", "unreviewed"));
    construct.relevance_score = c.value("relevance_score", 0.0);
    set.constructs.push_back(std::move(construct));
  }
  const auto& provenance = doc.at("provenance");
  set.provenance.summary_fingerprint = fingerprint_from_json(provenance.at("summary"));
  set.provenance.querier_fingerprint = fingerprint_from_json(provenance.at("querier"));
  return set;
}

inline nlohmann::json summary_to_json(const ActivitySummary& summary) {
  return {{"activity_label", summary.activity_label},
          {"text", summary.text},
          {"source_instance_refs", summary.source_instance_refs},
          {"fingerprint", fingerprint_to_json(summary.fingerprint)}};
}

inline ActivitySummary summary_from_json(const nlohmann::json& doc) {
  ActivitySummary summary;
  summary.activity_label = doc.at("activity_label").get<std::string>();
  summary.text = doc.at("text").get<std::string>();
  for (const auto& ref : doc.value("source_instance_refs", nlohmann::json::array())) {
    summary.source_instance_refs.push_back(ref.get<std::string>());
  }
  summary.fingerprint = fingerprint_from_json(doc.at("fingerprint"));
  return summary;
}

inline nlohmann::json instance_to_json(const ActivityInstance& instance) {
  return {{"ref", instance.ref},
          {"label", instance.label},
          {"start", format_timestamp(instance.start)},
          {"end", format_timestamp(instance.end)},
          {"truncated", instance.truncated},
          {"event_count", instance.events.size()}};
}

inline nlohmann::json paragraph_to_json(const InstanceParagraph& paragraph) {
  return {{"instance_ref", paragraph.instance_ref},
          {"activity_label", paragraph.activity_label},
          {"sentence_count", paragraph.sentence_count},
          {"text", paragraph.text}};
}

inline InstanceParagraph paragraph_from_json(const nlohmann::json& doc) {
  InstanceParagraph paragraph;
  paragraph.activity_label = doc.at("activity_label").get<std::string>();
  paragraph.text = doc.at("text").get<std::string>();
  paragraph.sentence_count = doc.at("sentence_count").get<std::size_t>();
  paragraph.instance_ref = doc.at("instance_ref").get<std::string>();
  return paragraph;
}

struct StoredConstructSet {
  std::size_t revision = 0;
  ConstructSet set;
};

// Append-only construct store: one set per line with a per-activity revision
// counter; the highest revision per activity wins. Appends flush immediately
// so a session interrupted between activities leaves only whole records.
class ConstructStore {
 public:
  explicit ConstructStore(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(path_)) return;
    for (const auto& record : jsonl::read(path_)) {
      StoredConstructSet stored;
      stored.revision = record.at("revision").get<std::size_t>();
      stored.set = construct_set_from_json(record);
      auto it = latest_.find(stored.set.activity_label);
      if (it == latest_.end() || it->second.revision < stored.revision) {
        latest_[stored.set.activity_label] = std::move(stored);
      }
    }
  }

  std::size_t append(const ConstructSet& set) {
    auto it = latest_.find(set.activity_label);
    const std::size_t revision = it == latest_.end() ? 1 : it->second.revision + 1;
    auto record = construct_set_to_json(set);
    record["revision"] = revision;
    jsonl::append(path_, record);
    latest_[set.activity_label] = {revision, set};
    return revision;
  }

  const std::map<std::string, StoredConstructSet>& latest() const { return latest_; }
  bool empty() const { return latest_.empty(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::map<std::string, StoredConstructSet> latest_;
};

// One reviewer decision as recorded; `revision` names the construct store
// revision the decision was applied to.
struct DecisionLogEntry {
  std::string activity_label;
  std::size_t revision = 0;
  std::vector<std::size_t> kept;
  std::optional<Category> category_override;
  std::string note;
  std::string timestamp;
};

inline void append_decision(const std::filesystem::path& path, const DecisionLogEntry& entry) {
  nlohmann::json record = {{"activity_label", entry.activity_label},
                           {"revision", entry.revision},
                           {"kept", entry.kept},
                           {"note", entry.note},
                           {"timestamp", entry.timestamp}};
  if (entry.category_override) {
    record["category_override"] = std::string(to_string(*entry.category_override));
  }
  jsonl::append(path, record);
}

inline std::vector<DecisionLogEntry> read_decisions(const std::filesystem::path& path) {
  std::vector<DecisionLogEntry> entries;
  for (const auto& record : jsonl::read(path)) {
    DecisionLogEntry entry;
    entry.activity_label = record.at("activity_label").get<std::string>();
    entry.revision = record.at("revision").get<std::size_t>();
    for (const auto& index : record.value("kept", nlohmann::json::array())) {
      entry.kept.push_back(index.get<std::size_t>());
    }
    if (record.contains("category_override")) {
      entry.category_override =
          category_from_string(record.at("category_override").get<std::string>());
    }
    entry.note = record.value("note", "");
    entry.timestamp = record.value("timestamp", "");
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace cminer
