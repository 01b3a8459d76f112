#pragma once

#include <map>
#include <memory>
#include <semaphore>
#include <string>

#include "raisf/backends/backend.hpp"

namespace raisf {

struct HttpBackendConfig {
    // Base URL, e.g. "http://127.0.0.1:8080" or "https://api.example.com/v1".
    std::string endpoint;
    std::string model;
    // Optional per-role overrides keyed by role name
    // (know/relevance/decompose/answer/aggregate).
    std::map<std::string, std::string> role_models;
    // Name of the environment variable holding the API key; the key itself
    // never appears in config files.
    std::string api_key_env;
    int max_in_flight = 4;
    int max_attempts = 3;
    int initial_backoff_ms = 500;
    int timeout_ms = 30000;
};

class HttpBackend : public ModelBackend {
public:
    static Result<std::shared_ptr<HttpBackend>> create(HttpBackendConfig cfg);

    Result<std::string> complete(ModelRole role,
                                 const std::string& prompt,
                                 const DecodingSettings& decoding) override;

    std::string name() const override { return "http"; }

    const std::string& completion_path() const { return path_; }

private:
    explicit HttpBackend(HttpBackendConfig cfg);

    std::string model_for(ModelRole role) const;

    HttpBackendConfig cfg_;
    std::string base_url_;
    std::string path_;
    std::string api_key_;
    std::counting_semaphore<256> gate_;
};

} // namespace raisf
