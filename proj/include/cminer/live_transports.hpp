// SPDX-License-Identifier: Apache-2.0
#pragma once

// HTTP-backed transports. Kept out of gateway.hpp so the core (and the
// tests) compile without pulling the HTTP stack in.

#include <cstdlib>
#include <memory>
#include <string>

#include "httplib.h"

#include "cminer/gateway.hpp"

namespace cminer {

inline std::string require_env_credential(const std::string& var_name) {
  const char* value = std::getenv(var_name.c_str());
  if (value == nullptr || *value == '\0') {
    throw ProviderError(0, "credential environment variable not set: " + var_name, false);
  }
  return value;
}

namespace detail {

inline bool status_is_retryable(int status) { return status == 429 || status >= 500; }

inline std::string post_json(const ProviderProfile& profile, const std::string& path,
                             const httplib::Headers& headers, const std::string& body) {
  httplib::Client client(profile.endpoint);
  client.set_connection_timeout(15, 0);
  client.set_read_timeout(120, 0);
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw ProviderError(0, "connection to " + profile.endpoint + " failed", /*retryable=*/true);
  }
  if (res->status != 200) {
    throw ProviderError(res->status, res->body, status_is_retryable(res->status));
  }
  return res->body;
}

}  // namespace detail

// Chat-completions dialect (the summarizer family default).
class OpenAiTransport : public Transport {
 public:
  std::string complete(const ProviderProfile& profile, const std::string& prompt,
                       const RequestContext& ctx) override {
    note_call();
    note_network_call();
    const std::string key = require_env_credential(profile.credential_ref);
    httplib::Headers headers = {{"Authorization", "Bearer " + key}};
    const double temperature = 0.0;
    const std::string body =
        detail::post_json(profile, openai_request_path(profile), headers,
                          build_openai_request_body(profile, prompt, temperature));
    (void)ctx;
    return parse_openai_response_text(body);
  }

  std::string name() const override { return "openai-http"; }
};

// generateContent dialect (the querier family default). The key travels as a
// query parameter, per that API's convention.
class GeminiTransport : public Transport {
 public:
  std::string complete(const ProviderProfile& profile, const std::string& prompt,
                       const RequestContext& ctx) override {
    note_call();
    note_network_call();
    const std::string key = require_env_credential(profile.credential_ref);
    const std::string path = gemini_request_path(profile) + "?key=" + key;
    const double temperature = 0.0;
    const std::string body = detail::post_json(
        profile, path, {}, build_gemini_request_body(profile, prompt, temperature));
    (void)ctx;
    return parse_gemini_response_text(body);
  }

  std::string name() const override { return "gemini-http"; }
};

// Picks the wire dialect for a profile by family token.
inline std::unique_ptr<Transport> make_live_transport(const ProviderProfile& profile) {
  if (profile.provider_name == "google") return std::make_unique<GeminiTransport>();
  return std::make_unique<OpenAiTransport>();
}

}  // namespace cminer
