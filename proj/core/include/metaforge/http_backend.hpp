#pragma once

#include <string>

#include "metaforge/backend.hpp"

namespace metaforge {

struct HttpBackendOptions {
    std::string base_url;  // e.g. "http://127.0.0.1:8089" or "https://api.example.com"
    std::string api_key;
    int max_retries = 3;       // transient failures retried this many times
    int initial_backoff_ms = 250;  // doubled per retry
    int timeout_s = 120;
};

// Chat-completions client: POST {base_url}/v1/chat/completions with fields
// model/messages/temperature/max_tokens; reads choices[0].message.content and
// usage.prompt_tokens / usage.completion_tokens.
//
// Retry policy: connection failures and 5xx back off exponentially up to
// max_retries; 429 waits for Retry-After when present; no other 4xx is ever
// retried.
class HttpBackend : public ModelBackend {
  public:
    explicit HttpBackend(HttpBackendOptions opts);

    // Reads METAFORGE_API_BASE and METAFORGE_API_KEY.
    static HttpBackend from_env();

    Completion complete(const ModelCall& call, const CallContext& ctx) override;

    const HttpBackendOptions& options() const { return opts_; }

  private:
    HttpBackendOptions opts_;
};

}  // namespace metaforge
