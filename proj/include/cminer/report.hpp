// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cminer/constructs.hpp"
#include "cminer/gateway.hpp"
#include "cminer/version.hpp"

namespace cminer {

// One report row: a discovered construct set, or the marker for an activity
// whose summarization produced nothing.
struct ReportRow {
  std::string activity_label;
  bool no_summary = false;
  ConstructSet set;  // meaningful when !no_summary
};

struct ReportContext {
  std::string dataset_name;
  std::uint64_t seed = 0;
  std::string marker_lexicon_version;
  ProviderProfile summarizer;
  ProviderProfile querier;
};

namespace detail {

inline std::string escape_cell(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

inline std::string constructs_cell(const ConstructSet& set) {
  std::string cell;
  for (const auto& construct : set.constructs) {
    if (!cell.empty()) cell += "; ";
    cell += std::to_string(construct.index) + ". " + construct.name;
    if (!construct.detail.empty()) cell += " (" + construct.detail + ")";
    if (construct.relevance == Relevance::Irrelevant) cell += " [irrelevant]";
  }
  return escape_cell(cell);
}

}  // namespace detail

// Three-column markdown table, one row per activity, with provenance header.
inline std::string render_construct_report(const ReportContext& context,
                                           const std::vector<ReportRow>& rows) {
  std::string out;
  out += "# Structural constructs: " + context.dataset_name + "\n\n";
  out += "- sample seed: " + std::to_string(context.seed) + "\n";
  out += "- sentence template: " + std::string(kSentenceTemplateVersion) + "\n";
  out += "- marker lexicon: " + context.marker_lexicon_version + "\n";
  out += "- summarizer: " + context.summarizer.provider_name + "/" +
         context.summarizer.model_name + "\n";
  out += "- querier: " + context.querier.provider_name + "/" + context.querier.model_name + "\n";
  out += "\n";
  out += "| Activity | Identified Structural Constructs | Type |\n";
  out += "| --- | --- | --- |\n";
  for (const auto& row : rows) {
    out += "| " + detail::escape_cell(row.activity_label) + " | ";
    if (row.no_summary) {
      out += "no summary generated | -- |\n";
    } else {
      out += detail::constructs_cell(row.set) + " | " +
             std::string(to_string(row.set.category)) + " |\n";
    }
  }
  return out;
}

}  // namespace cminer
