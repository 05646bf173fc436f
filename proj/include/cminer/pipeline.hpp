// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cminer/casas.hpp"
#include "cminer/constructs.hpp"
#include "cminer/gateway.hpp"
#include "cminer/locations.hpp"
#include "cminer/report.hpp"
#include "cminer/store.hpp"
#include "cminer/textualizer.hpp"

namespace cminer {

struct PipelineOptions {
  std::string dataset_name;
  std::filesystem::path dataset_path;
  std::filesystem::path locations_path;
  std::optional<std::filesystem::path> merge_map_path;
  std::optional<std::filesystem::path> markers_path;
  std::filesystem::path out_dir;
  std::filesystem::path cache_dir;

  SummarizationConfig summarization;
  ProviderProfile summarizer = default_summarizer_profile();
  ProviderProfile querier = default_querier_profile();
  RelevanceConfig relevance;
  RetryPolicy retry;

  // distinct activities processed concurrently, never more than this
  std::size_t fan_out = 4;
};

// Per-activity result. When ok is false, error explains why and summary/set
// hold whatever was produced before the failure.
struct ActivityOutcome {
  std::string label;
  bool ok = false;
  std::string error;
  ActivitySummary summary;
  ConstructSet set;
};

struct PipelineResult {
  Diagnostics diagnostics;
  std::map<std::string, std::size_t> counts_per_label;
  std::vector<ActivityOutcome> outcomes;  // sorted by activity label
  std::size_t failures = 0;
  std::filesystem::path report_path;
};

namespace detail {

// The derived stores are a pure function of the inputs, so a rerun replaces
// them wholesale; only review history is ever appended across runs.
inline void reset_out_dir(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const char* name :
       {"instances.jsonl", "paragraphs.jsonl", "summaries.jsonl", "constructs.jsonl",
        "report.md"}) {
    std::filesystem::remove(out_dir / name);
  }
}

}  // namespace detail

// Full derivation: sensor log → instances → paragraphs → summaries →
// construct sets → stores + report. A failure in one activity is recorded
// and the rest proceed.
inline PipelineResult run_pipeline(const PipelineOptions& options, Transport& summarizer_transport,
                                   Transport& querier_transport) {
  PipelineResult result;

  ParseResult parsed = parse_file(options.dataset_path.string());
  auto instances = segment_instances(parsed, &parsed.diagnostics);
  result.diagnostics = parsed.diagnostics;

  LabelMergeMap merge_map;
  if (options.merge_map_path) merge_map = LabelMergeMap::load(options.merge_map_path->string());
  auto canonical = canonicalize_labels(std::move(instances), merge_map);
  result.counts_per_label = canonical.counts_per_label;

  const LocationMap locations = LocationMap::load(options.locations_path.string());
  const MarkerLexicon markers = options.markers_path
                                    ? MarkerLexicon::load(options.markers_path->string())
                                    : default_marker_lexicon();

  std::map<std::string, std::vector<InstanceParagraph>> paragraphs_by_label;
  std::vector<InstanceParagraph> all_paragraphs;
  all_paragraphs.reserve(canonical.instances.size());
  for (const auto& instance : canonical.instances) {
    auto paragraph = encode_instance(instance, locations);
    paragraphs_by_label[instance.label].push_back(paragraph);
    all_paragraphs.push_back(std::move(paragraph));
  }

  std::vector<std::string> labels;
  labels.reserve(paragraphs_by_label.size());
  for (const auto& [label, _] : paragraphs_by_label) labels.push_back(label);

  ResponseCache cache(options.cache_dir);
  std::vector<ActivityOutcome> outcomes(labels.size());

  auto process_one = [&](std::size_t slot) {
    const std::string& label = labels[slot];
    ActivityOutcome& outcome = outcomes[slot];
    outcome.label = label;
    try {
      const auto& paragraphs = paragraphs_by_label[label];
      auto sampled = sample_paragraphs(label, paragraphs, options.summarization);
      outcome.summary = summarize_activity(label, sampled, options.summarizer,
                                           summarizer_transport, cache, options.retry);
      const std::string response = query_constructs(outcome.summary, options.querier,
                                                    querier_transport, cache, options.retry);

      ConstructSet set;
      set.activity_label = label;
      set.constructs = parse_construct_list(response, label);
      set.category = categorize(set.constructs, outcome.summary.text, response, markers);
      set.provenance.summary_fingerprint = outcome.summary.fingerprint;
      set.provenance.querier_fingerprint = {options.querier.provider_name,
                                            options.querier.model_name,
                                            sha256_hex(build_construct_query(outcome.summary.text))};
      score_constructs(set, make_activity_lexicon(label, locations), options.relevance);
      outcome.set = std::move(set);
      outcome.ok = true;
    } catch (const Error& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(options.fan_out, 1),
                                                    labels.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < labels.size(); ++i) process_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < labels.size(); i = next.fetch_add(1)) {
          process_one(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  detail::reset_out_dir(options.out_dir);
  for (const auto& instance : canonical.instances) {
    jsonl::append(options.out_dir / "instances.jsonl", instance_to_json(instance));
  }
  for (const auto& paragraph : all_paragraphs) {
    jsonl::append(options.out_dir / "paragraphs.jsonl", paragraph_to_json(paragraph));
  }

  ConstructStore store(options.out_dir / "constructs.jsonl");
  std::vector<ReportRow> rows;
  rows.reserve(outcomes.size());
  for (const auto& outcome : outcomes) {
    if (outcome.ok) {
      jsonl::append(options.out_dir / "summaries.jsonl", summary_to_json(outcome.summary));
      store.append(outcome.set);
      rows.push_back({outcome.label, false, outcome.set});
    } else {
      ++result.failures;
      rows.push_back({outcome.label, true, {}});
    }
  }

  ReportContext context{options.dataset_name, options.summarization.sample_seed, markers.version,
                        options.summarizer, options.querier};
  result.report_path = options.out_dir / "report.md";
  {
    std::ofstream out(result.report_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write report: " + result.report_path.string());
    out << render_construct_report(context, rows);
  }

  result.outcomes = std::move(outcomes);
  return result;
}

}  // namespace cminer
