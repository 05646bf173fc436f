// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>

#include "cminer/errors.hpp"
#include "cminer/textualizer.hpp"

namespace cminer {

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

class MixedLabels : public Error {
 public:
  MixedLabels(const std::string& expected, const std::string& got)
      : Error("paragraphs mix labels: expected '" + expected + "', got '" + got + "'") {}
};

namespace prompts {

// Fixed prompt regions. These strings are load-bearing: downstream caches key
// on the exact bytes and the golden tests pin them. Do not reflow or "fix"
// punctuation; the trailing double quotes in the query template are intended.
inline constexpr std::string_view kSummaryPreamble =
    "You are an AI assistant that is helping in generating a summary from diverse texts and "
    "adding a context to each sensor readings leveraging world knowledge";

inline constexpr std::string_view kSummaryInstructions =
    "Please generate short summarized text (1) from the paragraphs of given activity "
    "descriptions.\n"
    "Ignore the temperature sensors.\n"
    "Retain the time of occurrence of activity.\n"
    "You will be given different paragraphs of the activity.";

inline constexpr std::string_view kSummaryFormatPrefix =
    "The input has format: (Paragraph: Text detailing sensor event triggers for given "
    "activity). The output should be a json (key: (";
inline constexpr std::string_view kSummaryFormatSuffix =
    ")) containing the summarized paragraph.";

inline constexpr std::string_view kQueryPreamble =
    "You are an AI assistant helping with identifying categories of a summarized activity "
    "leveraging world knowledge.\"";
inline constexpr std::string_view kQuerySummaryPrefix = "The summary of the given activity is (";
inline constexpr std::string_view kQuerySummarySuffix = ").\"";
inline constexpr std::string_view kQueryQuestion =
    "Can you provide the sub-actions that make up this activity?\"";

}  // namespace prompts

// Preamble, instruction block, and format line (with the label interpolated
// into the output-key slot), then one "(Paragraph: ...)" frame per input
// paragraph, blocks separated by blank lines. No trailing newline.
inline std::string build_summarization_prompt(std::string_view label,
                                              std::span<const InstanceParagraph> paragraphs) {
  if (paragraphs.empty()) throw EmptyInput("no paragraphs to summarize");
  for (const auto& p : paragraphs) {
    if (p.activity_label != label) throw MixedLabels(std::string(label), p.activity_label);
  }
  std::string out;
  out += prompts::kSummaryPreamble;
  out += "\n\n";
  out += prompts::kSummaryInstructions;
  out += "\n\n";
  out += prompts::kSummaryFormatPrefix;
  out += label;
  out += prompts::kSummaryFormatSuffix;
  for (const auto& p : paragraphs) {
    out += "\n\n(Paragraph: ";
    out += p.text;
    out += ")";
  }
  return out;
}

// Three fixed lines with the summary text interpolated into the middle one.
// The activity label is never inserted; only caller-supplied summary text
// appears between the fixed regions. No trailing newline.
inline std::string build_construct_query(std::string_view summary_text) {
  std::string out;
  out += prompts::kQueryPreamble;
  out += '\n';
  out += prompts::kQuerySummaryPrefix;
  out += summary_text;
  out += prompts::kQuerySummarySuffix;
  out += '\n';
  out += prompts::kQueryQuestion;
  return out;
}

}  // namespace cminer
