// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace cminer {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Bumped whenever the sentence wording changes, so paragraph goldens and
// summaries can be traced to the template that produced them.
inline constexpr const char* kSentenceTemplateVersion = "sentence-v1";

// Version of the shipped sequence-marker lexicon used by categorization.
inline constexpr const char* kMarkerLexiconVersion = "markers-v1";

}  // namespace cminer
