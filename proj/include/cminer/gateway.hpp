// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cminer/errors.hpp"
#include "cminer/prompts.hpp"
#include "cminer/sha256.hpp"
#include "cminer/textualizer.hpp"

namespace cminer {

enum class ProviderRole { Summarizer, Querier };
enum class Stage { Summarize, Query };

// One configured LLM backend. provider_name is the family token used for the
// bias check; credential_ref names the environment variable holding the key
// (keys never come from config files).
struct ProviderProfile {
  ProviderRole role = ProviderRole::Summarizer;
  std::string provider_name;
  std::string model_name;
  std::string endpoint;
  std::string credential_ref;
};

inline ProviderProfile default_summarizer_profile() {
  return {ProviderRole::Summarizer, "openai", "gpt-4", "https://api.openai.com",
          "CM_SUMMARIZER_API_KEY"};
}

inline ProviderProfile default_querier_profile() {
  return {ProviderRole::Querier, "google", "gemini-pro",
          "https://generativelanguage.googleapis.com", "CM_QUERIER_API_KEY"};
}

class SameFamilyViolation : public Error {
 public:
  explicit SameFamilyViolation(const std::string& provider)
      : Error("summarizer and querier share the provider family '" + provider +
              "'; two distinct families are required") {}
};

inline void ensure_distinct_families(const ProviderProfile& summarizer,
                                     const ProviderProfile& querier) {
  if (summarizer.provider_name == querier.provider_name) {
    throw SameFamilyViolation(summarizer.provider_name);
  }
}

struct ProviderFingerprint {
  std::string provider;
  std::string model;
  std::string prompt_hash;

  bool operator==(const ProviderFingerprint&) const = default;
};

struct ActivitySummary {
  std::string activity_label;
  std::string text;
  std::vector<std::string> source_instance_refs;
  ProviderFingerprint fingerprint;
};

struct CompletionRecord {
  std::string prompt_hash;
  std::string request_time;
  std::string response_text;
  std::string provider;
  std::string model;
};

class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string& message, bool retryable)
      : Error("provider error (status " + std::to_string(status) + "): " + message),
        status_(status),
        retryable_(retryable) {}
  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

class NoSummaryGenerated : public Error {
 public:
  explicit NoSummaryGenerated(const std::string& label)
      : Error("no summary generated for activity '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class CacheCorrupt : public Error {
 public:
  explicit CacheCorrupt(const std::string& path) : Error("corrupt cache entry: " + path) {}
};

struct RequestContext {
  std::string activity_label;
  Stage stage = Stage::Summarize;
};

// One backend invocation target. calls() counts every invocation;
// network_calls() counts only those that touched the network, so offline
// transports keep it at zero by construction.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string complete(const ProviderProfile& profile, const std::string& prompt,
                               const RequestContext& ctx) = 0;
  virtual std::string name() const = 0;

  std::uint64_t calls() const { return calls_.load(); }
  std::uint64_t network_calls() const { return network_calls_.load(); }

 protected:
  void note_call() { ++calls_; }
  void note_network_call() { ++network_calls_; }

 private:
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> network_calls_{0};
};

// Offline backend: responses come from a per-activity fixture table.
// Summarize stage answers with the canonical json envelope (or the empty
// string when no summary is recorded); query stage answers verbatim.
class FixtureTransport : public Transport {
 public:
  struct Entry {
    std::string summary_text;
    std::string construct_response_text;
  };

  explicit FixtureTransport(std::map<std::string, Entry> entries)
      : entries_(std::move(entries)) {}

  static FixtureTransport load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open fixture file: " + path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error("fixture file is not valid json: " + path + ": " + e.what());
    }
    std::map<std::string, Entry> entries;
    for (const auto& [label, value] : doc.items()) {
      Entry entry;
      entry.summary_text = value.value("summary_text", "");
      entry.construct_response_text = value.value("construct_response_text", "");
      entries[label] = std::move(entry);
    }
    return FixtureTransport(std::move(entries));
  }

  std::string complete(const ProviderProfile&, const std::string&,
                       const RequestContext& ctx) override {
    note_call();
    auto it = entries_.find(ctx.activity_label);
    if (it == entries_.end()) {
      throw ProviderError(404, "no fixture entry for activity '" + ctx.activity_label + "'",
                          false);
    }
    if (ctx.stage == Stage::Summarize) {
      if (it->second.summary_text.empty()) return "";
      nlohmann::json envelope;
      envelope[ctx.activity_label] = it->second.summary_text;
      return envelope.dump();
    }
    return it->second.construct_response_text;
  }

  std::string name() const override { return "fixture"; }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

inline std::string format_iso8601_utc(std::chrono::system_clock::time_point tp) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Disk cache, one record per file. The filename is the digest of
// (provider, model, prompt), so a fingerprint change is a distinct entry.
// Readers share; writers serialize. Records land via write-temp-then-rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::string entry_key(const ProviderProfile& profile, const std::string& prompt) const {
    return sha256_hex(profile.provider_name + "\n" + profile.model_name + "\n" + prompt);
  }

  std::optional<CompletionRecord> get(const ProviderProfile& profile, const std::string& prompt) {
    const auto path = entry_path(profile, prompt);
    {
      std::shared_lock lock(mutex_);
      if (!std::filesystem::exists(path)) return std::nullopt;
      try {
        return read_record(path);
      } catch (const CacheCorrupt&) {
      }
    }
    quarantine(path);
    return std::nullopt;
  }

  void put(const ProviderProfile& profile, const std::string& prompt,
           const std::string& response_text,
           std::chrono::system_clock::time_point now = std::chrono::system_clock::now()) {
    CompletionRecord record;
    record.prompt_hash = sha256_hex(prompt);
    record.request_time = format_iso8601_utc(now);
    record.response_text = response_text;
    record.provider = profile.provider_name;
    record.model = profile.model_name;

    nlohmann::json doc;
    doc["prompt_hash"] = record.prompt_hash;
    doc["request_time"] = record.request_time;
    doc["response_text"] = record.response_text;
    doc["provider"] = record.provider;
    doc["model"] = record.model;

    const auto path = entry_path(profile, prompt);
    const auto tmp = path.string() + ".tmp";
    std::unique_lock lock(mutex_);
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write cache entry: " + tmp);
      out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
  }

  std::uint64_t quarantined() const { return quarantined_.load(); }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const ProviderProfile& profile,
                                   const std::string& prompt) const {
    return dir_ / (entry_key(profile, prompt) + ".json");
  }

  static CompletionRecord read_record(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheCorrupt(path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw CacheCorrupt(path.string());
    CompletionRecord record;
    if (!doc.contains("prompt_hash") || !doc.contains("response_text") ||
        !doc["response_text"].is_string()) {
      throw CacheCorrupt(path.string());
    }
    record.prompt_hash = doc.value("prompt_hash", "");
    record.request_time = doc.value("request_time", "");
    record.response_text = doc["response_text"].get<std::string>();
    record.provider = doc.value("provider", "");
    record.model = doc.value("model", "");
    return record;
  }

  void quarantine(const std::filesystem::path& path) {
    std::unique_lock lock(mutex_);
    std::error_code ec;
    std::filesystem::rename(path, path.string() + ".corrupt", ec);
    if (!ec) ++quarantined_;
  }

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::atomic<std::uint64_t> quarantined_{0};
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  std::chrono::milliseconds max_delay{30000};
  bool jitter = true;
  std::uint64_t jitter_seed = 0x5eedULL;
  // injectable so tests never sleep for real
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
};

namespace detail {

// splitmix64; the library never draws from std:: distributions so sampled
// subsets and jitter are stable across standard library implementations.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // unbiased draw in [0, n) by rejection
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

// Cache-first completion. Misses call the transport with bounded exponential
// backoff, retrying only errors marked retryable, then persist the record.
inline std::string cached_complete(Transport& transport, ResponseCache& cache,
                                   const ProviderProfile& profile, const std::string& prompt,
                                   const RequestContext& ctx, const RetryPolicy& retry = {}) {
  if (auto hit = cache.get(profile, prompt)) return hit->response_text;

  detail::DeterministicRng jitter_rng(retry.jitter_seed);
  for (int attempt = 1;; ++attempt) {
    try {
      std::string response = transport.complete(profile, prompt, ctx);
      cache.put(profile, prompt, response);
      return response;
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt >= retry.max_attempts) throw;
      auto delay = retry.base_delay * (1LL << (attempt - 1));
      if (delay > retry.max_delay) delay = retry.max_delay;
      if (retry.jitter && delay.count() > 0) {
        delay += std::chrono::milliseconds(
            jitter_rng.bounded(static_cast<std::uint64_t>(delay.count() / 2 + 1)));
      }
      retry.sleep(delay);
    }
  }
}

struct SummarizationConfig {
  std::size_t n = 20;
  std::uint64_t sample_seed = 42;
  std::size_t token_budget = 8000;
  double temperature = 0.0;
};

// ceil(characters/4); provider-independent on purpose
inline std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

// Uniform sample of min(n, available) paragraphs without replacement, keeping
// original order, then whole paragraphs are dropped from the end until the
// assembled prompt fits the token budget. At least one paragraph survives.
inline std::vector<InstanceParagraph> sample_paragraphs(
    const std::string& label, std::span<const InstanceParagraph> paragraphs,
    const SummarizationConfig& config) {
  if (paragraphs.empty()) throw EmptyInput("no paragraphs for activity '" + label + "'");

  std::vector<std::size_t> indices(paragraphs.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;

  const std::size_t keep = std::min(config.n == 0 ? std::size_t{1} : config.n, paragraphs.size());
  detail::DeterministicRng rng(config.sample_seed);
  for (std::size_t i = 0; i < keep; ++i) {  // partial Fisher-Yates
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(keep);
  std::sort(indices.begin(), indices.end());

  std::vector<InstanceParagraph> selected;
  selected.reserve(keep);
  for (std::size_t idx : indices) selected.push_back(paragraphs[idx]);

  while (selected.size() > 1 &&
         estimate_tokens(build_summarization_prompt(label, selected)) > config.token_budget) {
    selected.pop_back();
  }
  return selected;
}

namespace detail {

// Drops markdown code-fence marker lines, keeping fenced content.
inline std::string strip_code_fences(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!strings::starts_with(strings::trim(line), "```")) {
      out += line;
      if (end != std::string_view::npos) out += '\n';
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

// First balanced {...} region, tracking string literals so braces inside
// quoted values do not derail the depth count.
inline std::optional<std::string> first_balanced_object(std::string_view text) {
  std::size_t begin = text.find('{');
  if (begin == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = begin; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return std::string(text.substr(begin, i - begin + 1));
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Pulls the summary string out of a raw response: prefer the value under the
// activity label, else the value of a single-key object. Anything else is
// NoSummaryGenerated (this models the fixture row with an absent summary).
inline std::string extract_summary_text(const std::string& response, const std::string& label) {
  auto object_text = detail::first_balanced_object(detail::strip_code_fences(response));
  if (!object_text) throw NoSummaryGenerated(label);
  nlohmann::json doc = nlohmann::json::parse(*object_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) throw NoSummaryGenerated(label);

  std::string text;
  if (doc.contains(label) && doc[label].is_string()) {
    text = doc[label].get<std::string>();
  } else if (doc.size() == 1 && doc.begin().value().is_string()) {
    text = doc.begin().value().get<std::string>();
  }
  if (strings::trim(text).empty()) throw NoSummaryGenerated(label);
  return text;
}

// Stage 1: sampled paragraphs → one summary for the activity.
inline ActivitySummary summarize_activity(const std::string& label,
                                          std::span<const InstanceParagraph> paragraphs,
                                          const ProviderProfile& summarizer, Transport& transport,
                                          ResponseCache& cache, const RetryPolicy& retry = {}) {
  const std::string prompt = build_summarization_prompt(label, paragraphs);
  const std::string response =
      cached_complete(transport, cache, summarizer, prompt, {label, Stage::Summarize}, retry);

  ActivitySummary summary;
  summary.activity_label = label;
  summary.text = extract_summary_text(response, label);
  for (const auto& p : paragraphs) summary.source_instance_refs.push_back(p.instance_ref);
  summary.fingerprint = {summarizer.provider_name, summarizer.model_name, sha256_hex(prompt)};
  return summary;
}

// Stage 2: summary → raw construct response, verbatim for downstream parsing.
// The label rides in the request context for fixtures but never in the prompt.
inline std::string query_constructs(const ActivitySummary& summary,
                                    const ProviderProfile& querier, Transport& transport,
                                    ResponseCache& cache, const RetryPolicy& retry = {}) {
  if (summary.fingerprint.provider == querier.provider_name) {
    throw SameFamilyViolation(querier.provider_name);
  }
  const std::string prompt = build_construct_query(summary.text);
  return cached_complete(transport, cache, querier, prompt,
                         {summary.activity_label, Stage::Query}, retry);
}

// Request/response shaping for the two live backend dialects. Pure functions
// so the wire format is testable without a network.
inline std::string build_openai_request_body(const ProviderProfile& profile,
                                             const std::string& prompt, double temperature) {
  nlohmann::json body;
  body["model"] = profile.model_name;
  body["temperature"] = temperature;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  return body.dump();
}

inline std::string openai_request_path(const ProviderProfile&) { return "/v1/chat/completions"; }

inline std::string parse_openai_response_text(const std::string& body) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
      !doc["choices"][0].contains("message") ||
      !doc["choices"][0]["message"].contains("content") ||
      !doc["choices"][0]["message"]["content"].is_string()) {
    throw ProviderError(0, "summarizer response has unexpected shape", false);
  }
  return doc["choices"][0]["message"]["content"].get<std::string>();
}

inline std::string build_gemini_request_body(const ProviderProfile&, const std::string& prompt,
                                             double temperature) {
  nlohmann::json body;
  body["contents"] =
      nlohmann::json::array({{{"parts", nlohmann::json::array({{{"text", prompt}}})}}});
  body["generationConfig"] = {{"temperature", temperature}};
  return body.dump();
}

inline std::string gemini_request_path(const ProviderProfile& profile) {
  return "/v1beta/models/" + profile.model_name + ":generateContent";
}

inline std::string parse_gemini_response_text(const std::string& body) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("candidates") || doc["candidates"].empty()) {
    throw ProviderError(0, "querier response has unexpected shape", false);
  }
  const auto& candidate = doc["candidates"][0];
  if (!candidate.contains("content") || !candidate["content"].contains("parts") ||
      candidate["content"]["parts"].empty() ||
      !candidate["content"]["parts"][0].contains("text") ||
      !candidate["content"]["parts"][0]["text"].is_string()) {
    throw ProviderError(0, "querier response has unexpected shape", false);
  }
  return candidate["content"]["parts"][0]["text"].get<std::string>();
}

}  // namespace cminer
