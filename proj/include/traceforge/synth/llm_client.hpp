#pragma once

#include <traceforge/error.hpp>

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace traceforge::synth {

struct LlmRequest {
    std::string prompt;
    std::uint64_t attempt{0};  ///< Retry ordinal for the same prompt; lets seeded clients vary output.
};

/// Text-completion backend. Implementations throw Error with transport_error,
/// auth_error or timeout_error.
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual auto complete(const LlmRequest& request) -> std::string = 0;
    [[nodiscard]] virtual auto id() const -> std::string = 0;
};

struct RetryPolicy {
    int max_retries{2};
    std::chrono::milliseconds initial_backoff{200};
    double multiplier{2.0};
};

struct Generation {
    std::string text;
    std::chrono::milliseconds elapsed{0};
    int transport_attempts{1};
};

/// Sends the prompt, retrying TransportError with exponential backoff. Auth and timeout
/// failures are not retried.
inline auto generate(const std::string& prompt, LlmClient& client, const RetryPolicy& policy = {},
                     std::uint64_t attempt = 0) -> Generation {
    const auto start = std::chrono::steady_clock::now();
    auto backoff = policy.initial_backoff;
    for (int tries = 1;; ++tries) {
        try {
            std::string text = client.complete({prompt, attempt});
            auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
            return {std::move(text), elapsed, tries};
        } catch (const Error& e) {
            if (e.code() != Errc::transport_error || tries > policy.max_retries) throw;
        }
        std::this_thread::sleep_for(backoff);
        backoff = std::chrono::milliseconds(static_cast<std::int64_t>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
}

/// Adapter over a callable; used by tests and embedding code.
class FunctionLlmClient final : public LlmClient {
public:
    using Fn = std::function<std::string(const LlmRequest&)>;

    FunctionLlmClient(std::string id, Fn fn) : id_(std::move(id)), fn_(std::move(fn)) {}

    auto complete(const LlmRequest& request) -> std::string override { return fn_(request); }
    [[nodiscard]] auto id() const -> std::string override { return id_; }

private:
    std::string id_;
    Fn fn_;
};

/// Replays recorded responses. A response is chosen by the first entry whose `match`
/// substring occurs in the prompt; the optional fallback answers everything else.
class FixtureLlmClient final : public LlmClient {
public:
    struct Entry {
        std::string match;
        std::string response;
    };

    explicit FixtureLlmClient(std::vector<Entry> entries, std::optional<std::string> fallback = std::nullopt,
                              std::string id = "fixture")
        : entries_(std::move(entries)), fallback_(std::move(fallback)), id_(std::move(id)) {}

    static auto from_json(const nlohmann::json& j) -> FixtureLlmClient {
        std::vector<Entry> entries;
        for (const auto& e : j.at("responses")) {
            entries.push_back({e.at("match").get<std::string>(), e.at("response").get<std::string>()});
        }
        std::optional<std::string> fallback;
        if (j.contains("fallback")) fallback = j.at("fallback").get<std::string>();
        return FixtureLlmClient(std::move(entries), std::move(fallback), j.value("id", std::string("fixture")));
    }

    auto complete(const LlmRequest& request) -> std::string override {
        for (const auto& entry : entries_) {
            if (request.prompt.find(entry.match) != std::string::npos) return entry.response;
        }
        if (fallback_) return *fallback_;
        throw Error(Errc::transport_error, "no recorded response matches the prompt");
    }
    [[nodiscard]] auto id() const -> std::string override { return id_; }

private:
    std::vector<Entry> entries_;
    std::optional<std::string> fallback_;
    std::string id_;
};

inline constexpr const char* kApiKeyVariable = "TRACEFORGE_LLM_API_KEY";

struct HttpLlmSettings {
    std::string endpoint{"http://localhost:8080/v1/chat/completions"};
    std::string model_name{"gpt-4"};
    double temperature{0.2};
    int max_tokens{2048};
    std::string json_response_path{"/choices/0/message/content"};
    bool use_messages{true};  ///< Chat `messages` body instead of a bare `prompt` field.
    std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

inline void from_json(const nlohmann::json& j, HttpLlmSettings& s) {
    s.endpoint = j.value("endpoint", s.endpoint);
    s.model_name = j.value("model_name", s.model_name);
    s.temperature = j.value("temperature", s.temperature);
    s.max_tokens = j.value("max_tokens", s.max_tokens);
    s.json_response_path = j.value("json_response_path", s.json_response_path);
    s.use_messages = j.value("use_messages", s.use_messages);
    if (j.contains("timeout_ms")) s.timeout = std::chrono::milliseconds(j.at("timeout_ms").get<std::int64_t>());
}

/// Accepts a JSON pointer (`/choices/0/text`) or a dotted path (`choices.0.text`).
inline auto to_json_pointer(std::string_view path) -> nlohmann::json::json_pointer {
    if (path.empty() || path.front() == '/') return nlohmann::json::json_pointer(std::string(path));
    std::string pointer;
    for (char c : path) pointer += c == '.' ? '/' : c;
    return nlohmann::json::json_pointer("/" + pointer);
}

/// POSTs {model, messages|prompt, temperature, max_tokens} as JSON with a bearer token
/// read from TRACEFORGE_LLM_API_KEY.
class HttpLlmClient final : public LlmClient {
public:
    explicit HttpLlmClient(HttpLlmSettings settings) : settings_(std::move(settings)) {
        auto scheme_end = settings_.endpoint.find("://");
        if (scheme_end == std::string::npos) throw Error(Errc::invalid_config, "endpoint must include a scheme");
        auto path_start = settings_.endpoint.find('/', scheme_end + 3);
        base_ = settings_.endpoint.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : settings_.endpoint.substr(path_start);
        if (const char* key = std::getenv(kApiKeyVariable)) api_key_ = key;
    }

    [[nodiscard]] auto request_body(const std::string& prompt) const -> nlohmann::json {
        nlohmann::json body{{"model", settings_.model_name},
                            {"temperature", settings_.temperature},
                            {"max_tokens", settings_.max_tokens}};
        if (settings_.use_messages) {
            body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
        } else {
            body["prompt"] = prompt;
        }
        return body;
    }

    auto complete(const LlmRequest& request) -> std::string override {
        httplib::Client client(base_);
        auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(settings_.timeout).count();
        client.set_connection_timeout(0, timeout_us);
        client.set_read_timeout(0, timeout_us);
        client.set_write_timeout(0, timeout_us);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        const auto start = std::chrono::steady_clock::now();
        auto result = client.Post(path_, headers, request_body(request.prompt).dump(), "application/json");
        if (!result) {
            auto err = result.error();
            auto waited = std::chrono::steady_clock::now() - start;
            if (err == httplib::Error::ConnectionTimeout ||
                (err == httplib::Error::Read && waited >= settings_.timeout * 9 / 10)) {
                throw Error(Errc::timeout_error, "no response from " + settings_.endpoint + " within " +
                                                     std::to_string(settings_.timeout.count()) + " ms");
            }
            throw Error(Errc::transport_error, settings_.endpoint + ": " + httplib::to_string(err));
        }
        if (result->status == 401 || result->status == 403) {
            throw Error(Errc::auth_error, settings_.endpoint + " rejected credentials (HTTP " +
                                              std::to_string(result->status) + ")");
        }
        if (result->status < 200 || result->status >= 300) {
            throw Error(Errc::transport_error, settings_.endpoint + " answered HTTP " + std::to_string(result->status));
        }
        nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
        auto pointer = to_json_pointer(settings_.json_response_path);
        if (reply.is_discarded() || !reply.contains(pointer) || !reply.at(pointer).is_string()) {
            throw Error(Errc::format_error, "response has no string at '" + settings_.json_response_path + "'");
        }
        return reply.at(pointer).get<std::string>();
    }

    [[nodiscard]] auto id() const -> std::string override { return "http:" + settings_.model_name; }

private:
    HttpLlmSettings settings_;
    std::string base_;
    std::string path_;
    std::string api_key_;
};

}  // namespace traceforge::synth
