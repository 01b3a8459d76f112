#include "raisf/backends/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "raisf/core/types.hpp"

namespace raisf {

using nlohmann::json;

const char* to_string(ModelRole role) {
    switch (role) {
    case ModelRole::Know: return "know";
    case ModelRole::Relevance: return "relevance";
    case ModelRole::Decompose: return "decompose";
    case ModelRole::Answer: return "answer";
    case ModelRole::Aggregate: return "aggregate";
    }
    return "answer";
}

namespace {

struct EndpointParts {
    std::string base;
    std::string prefix;
};

bool split_endpoint(const std::string& endpoint, EndpointParts& out) {
    std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) return false;
    std::size_t host_start = scheme + 3;
    if (host_start >= endpoint.size()) return false;
    std::size_t slash = endpoint.find('/', host_start);
    if (slash == std::string::npos) {
        out.base = endpoint;
        out.prefix = "";
    } else {
        out.base = endpoint.substr(0, slash);
        out.prefix = endpoint.substr(slash);
        while (!out.prefix.empty() && out.prefix.back() == '/') {
            out.prefix.pop_back();
        }
    }
    return true;
}

std::string completion_path_for(const std::string& prefix) {
    if (prefix.size() >= 3 && prefix.compare(prefix.size() - 3, 3, "/v1") == 0) {
        return prefix + "/chat/completions";
    }
    return prefix + "/v1/chat/completions";
}

} // namespace

HttpBackend::HttpBackend(HttpBackendConfig cfg)
    : cfg_(std::move(cfg)), gate_(cfg_.max_in_flight) {
    EndpointParts parts;
    split_endpoint(cfg_.endpoint, parts);
    base_url_ = parts.base;
    path_ = completion_path_for(parts.prefix);
    if (!cfg_.api_key_env.empty()) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (key) api_key_ = key;
    }
}

Result<std::shared_ptr<HttpBackend>> HttpBackend::create(HttpBackendConfig cfg) {
    EndpointParts parts;
    if (cfg.endpoint.empty() || !split_endpoint(cfg.endpoint, parts)) {
        return make_error(Errc::InvalidConfig,
                          "http backend endpoint must be scheme://host[:port][/prefix]");
    }
    if (cfg.model.empty()) {
        return make_error(Errc::InvalidConfig, "http backend requires a model name");
    }
    if (cfg.max_in_flight < 1 || cfg.max_in_flight > 256) {
        return make_error(Errc::InvalidConfig, "max_in_flight must be in [1, 256]");
    }
    if (cfg.max_attempts < 1) {
        return make_error(Errc::InvalidConfig, "max_attempts must be >= 1");
    }
    if (cfg.initial_backoff_ms < 0 || cfg.timeout_ms < 1) {
        return make_error(Errc::InvalidConfig, "invalid backoff or timeout");
    }
    return std::shared_ptr<HttpBackend>(new HttpBackend(std::move(cfg)));
}

std::string HttpBackend::model_for(ModelRole role) const {
    auto it = cfg_.role_models.find(to_string(role));
    if (it != cfg_.role_models.end() && !it->second.empty()) {
        return it->second;
    }
    return cfg_.model;
}

Result<std::string> HttpBackend::complete(ModelRole role,
                                          const std::string& prompt,
                                          const DecodingSettings& decoding) {
    if (trim_copy(prompt).empty()) {
        return make_error(Errc::InvalidParams, "empty prompt");
    }

    json body;
    body["model"] = model_for(role);
    body["messages"] = json::array({
        json{{"role", "user"}, {"content", prompt}},
    });
    body["temperature"] = decoding.temperature;
    body["max_tokens"] = decoding.max_output_tokens;
    std::string payload = body.dump();

    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    gate_.acquire();
    struct Release {
        std::counting_semaphore<256>& gate;
        ~Release() { gate.release(); }
    } release{gate_};

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
        if (attempt > 0) {
            auto wait = std::chrono::milliseconds(
                static_cast<long long>(cfg_.initial_backoff_ms) << (attempt - 1));
            std::this_thread::sleep_for(wait);
        }

        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));

        httplib::Result res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error: HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            return make_error(Errc::BackendUnavailable,
                              "HTTP " + std::to_string(res->status) + " from " + base_url_);
        }

        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.is_object() ||
            !reply.contains("choices") || !reply["choices"].is_array() ||
            reply["choices"].empty()) {
            return make_error(Errc::BackendRefusal, "malformed completion payload");
        }
        const json& choice = reply["choices"][0];
        if (!choice.is_object() || !choice.contains("message") ||
            !choice["message"].is_object() || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string()) {
            return make_error(Errc::BackendRefusal, "completion payload missing content");
        }
        std::string content = choice["message"]["content"].get<std::string>();
        if (trim_copy(content).empty()) {
            return make_error(Errc::BackendRefusal, "empty completion");
        }
        return content;
    }
    return make_error(Errc::BackendUnavailable,
                      "request failed after " + std::to_string(cfg_.max_attempts) +
                          " attempts: " + last_error);
}

} // namespace raisf
