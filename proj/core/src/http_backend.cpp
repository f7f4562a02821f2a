#include "metaforge/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "metaforge/errors.hpp"

namespace metaforge {

namespace {

using nlohmann::json;

json to_wire(const ModelCall& call) {
    json messages = json::array();
    for (const auto& m : call.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    return json{{"model", call.model_id},
                {"messages", messages},
                {"temperature", call.temperature},
                {"max_tokens", call.max_tokens}};
}

Completion from_wire(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw Error(Errc::transport_error, std::string("unparseable response body: ") + e.what());
    }
    try {
        Completion c;
        c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        const auto& usage = j.at("usage");
        c.tokens_in = usage.at("prompt_tokens").get<std::int64_t>();
        c.tokens_out = usage.at("completion_tokens").get<std::int64_t>();
        return c;
    } catch (const json::exception& e) {
        throw Error(Errc::transport_error,
                    std::string("response missing required fields: ") + e.what());
    }
}

bool looks_like_context_overflow(const std::string& body) {
    return body.find("context_length_exceeded") != std::string::npos ||
           body.find("maximum context length") != std::string::npos;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions opts) : opts_(std::move(opts)) {
    if (opts_.base_url.empty()) {
        throw Error(Errc::bad_config, "HTTP backend requires a base URL");
    }
}

HttpBackend HttpBackend::from_env() {
    HttpBackendOptions opts;
    if (const char* base = std::getenv("METAFORGE_API_BASE")) opts.base_url = base;
    if (const char* key = std::getenv("METAFORGE_API_KEY")) opts.api_key = key;
    if (opts.base_url.empty()) {
        throw Error(Errc::bad_config, "METAFORGE_API_BASE is not set");
    }
    return HttpBackend(std::move(opts));
}

Completion HttpBackend::complete(const ModelCall& call, const CallContext&) {
    if (call.messages.empty()) {
        throw Error(Errc::invalid_call, "model call carries no messages");
    }

    httplib::Client client(opts_.base_url);
    client.set_connection_timeout(opts_.timeout_s);
    client.set_read_timeout(opts_.timeout_s);
    httplib::Headers headers;
    if (!opts_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + opts_.api_key);
    }

    const std::string body = to_wire(call).dump();
    std::string last_error = "no attempt made";
    int backoff_ms = opts_.initial_backoff_ms;

    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }

        auto res = client.Post("/v1/chat/completions", headers, body, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return from_wire(res->body);

        if (res->status == 429) {
            last_error = "rate limited (429)";
            if (attempt == opts_.max_retries) break;
            if (auto ra = res->get_header_value("Retry-After"); !ra.empty()) {
                int wait_s = std::atoi(ra.c_str());
                std::this_thread::sleep_for(std::chrono::seconds(std::min(wait_s, 30)));
            }
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        // Remaining 4xx are permanent; never retried.
        if (looks_like_context_overflow(res->body)) {
            throw Error(Errc::context_too_long,
                        "request rejected: " + res->body.substr(0, 200));
        }
        throw Error(Errc::transport_error, "HTTP " + std::to_string(res->status) + ": " +
                                               res->body.substr(0, 200));
    }

    if (last_error == "rate limited (429)") {
        throw Error(Errc::rate_limited, "still rate limited after " +
                                            std::to_string(opts_.max_retries) + " retries");
    }
    throw Error(Errc::transport_error,
                last_error + " (after " + std::to_string(opts_.max_retries) + " retries)");
}

}  // namespace metaforge
