#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "raisf/backends/http_backend.hpp"

using namespace raisf;
using nlohmann::json;

namespace {

DecodingSettings decoding;

// Loopback chat-completions server for exercising the wire client.
class FakeServer {
public:
    explicit FakeServer(httplib::Server::Handler handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port_);
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string completion_body(const std::string& content) {
    json j;
    j["choices"] = json::array({json{{"message", json{{"role", "assistant"},
                                                      {"content", content}}}}});
    return j.dump();
}

HttpBackendConfig config_for(const FakeServer& server) {
    HttpBackendConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.model = "test-model";
    cfg.max_attempts = 3;
    cfg.initial_backoff_ms = 1;
    cfg.timeout_ms = 2000;
    return cfg;
}

} // namespace

TEST_CASE("http backend posts an openai-style body and returns the content") {
    json seen_body;
    std::string seen_auth;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_body = json::parse(req.body);
        if (req.has_header("Authorization")) {
            seen_auth = req.get_header_value("Authorization");
        }
        res.set_content(completion_body("Paris."), "application/json");
    });

    HttpBackendConfig cfg = config_for(server);
    cfg.role_models["know"] = "judge-model";
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg);
    REQUIRE(backend.ok());

    DecodingSettings custom;
    custom.temperature = 0.25;
    custom.max_output_tokens = 99;
    Result<std::string> reply =
        backend.value()->complete(ModelRole::Answer, "What is the capital?", custom);
    REQUIRE(reply.ok());
    CHECK(reply.value() == "Paris.");
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["messages"][0]["role"] == "user");
    CHECK(seen_body["messages"][0]["content"] == "What is the capital?");
    CHECK(seen_body["temperature"] == doctest::Approx(0.25));
    CHECK(seen_body["max_tokens"] == 99);
    CHECK(seen_auth == "");  // no api_key_env configured

    // Per-role model override lands in the body.
    REQUIRE(backend.value()->complete(ModelRole::Know, "probe?", decoding).ok());
    CHECK(seen_body["model"] == "judge-model");
}

TEST_CASE("http backend reads the api key from the environment by name") {
    std::string seen_auth;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        res.set_content(completion_body("ok"), "application/json");
    });
    setenv("RAISF_TEST_API_KEY", "secret-token", 1);
    HttpBackendConfig cfg = config_for(server);
    cfg.api_key_env = "RAISF_TEST_API_KEY";
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg);
    REQUIRE(backend.ok());
    REQUIRE(backend.value()->complete(ModelRole::Answer, "q?", decoding).ok());
    CHECK(seen_auth == "Bearer secret-token");
    unsetenv("RAISF_TEST_API_KEY");
}

TEST_CASE("server errors are retried until they clear") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) < 2) {
            res.status = 503;
            res.set_content("overloaded", "text/plain");
            return;
        }
        res.set_content(completion_body("eventually fine"), "application/json");
    });
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(config_for(server));
    REQUIRE(backend.ok());
    Result<std::string> reply = backend.value()->complete(ModelRole::Answer, "q?", decoding);
    REQUIRE(reply.ok());
    CHECK(reply.value() == "eventually fine");
    CHECK(calls.load() == 3);
}

TEST_CASE("persistent server errors exhaust the retry budget") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        calls.fetch_add(1);
        res.status = 500;
    });
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(config_for(server));
    REQUIRE(backend.ok());
    Result<std::string> reply = backend.value()->complete(ModelRole::Answer, "q?", decoding);
    REQUIRE_FALSE(reply.ok());
    CHECK(reply.error().code == Errc::BackendUnavailable);
    CHECK(calls.load() == 3);
}

TEST_CASE("client errors are terminal with no retry") {
    std::atomic<int> calls{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        calls.fetch_add(1);
        res.status = 401;
        res.set_content("{\"error\": \"bad key\"}", "application/json");
    });
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(config_for(server));
    REQUIRE(backend.ok());
    Result<std::string> reply = backend.value()->complete(ModelRole::Answer, "q?", decoding);
    REQUIRE_FALSE(reply.ok());
    CHECK(reply.error().code == Errc::BackendUnavailable);
    CHECK(calls.load() == 1);
}

TEST_CASE("malformed or empty completions surface as refusals") {
    std::string payload = "{}";
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content(payload, "application/json");
    });
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(config_for(server));
    REQUIRE(backend.ok());

    CHECK(backend.value()->complete(ModelRole::Answer, "q?", decoding).error().code ==
          Errc::BackendRefusal);

    payload = "not json at all";
    CHECK(backend.value()->complete(ModelRole::Answer, "q?", decoding).error().code ==
          Errc::BackendRefusal);

    payload = completion_body("   ");
    CHECK(backend.value()->complete(ModelRole::Answer, "q?", decoding).error().code ==
          Errc::BackendRefusal);

    payload = R"({"choices":[{"message":{"role":"assistant"}}]})";
    CHECK(backend.value()->complete(ModelRole::Answer, "q?", decoding).error().code ==
          Errc::BackendRefusal);
}

TEST_CASE("an unreachable endpoint fails as unavailable after retries") {
    HttpBackendConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1";  // nothing listens on port 1
    cfg.model = "m";
    cfg.max_attempts = 2;
    cfg.initial_backoff_ms = 1;
    cfg.timeout_ms = 200;
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg);
    REQUIRE(backend.ok());
    Result<std::string> reply = backend.value()->complete(ModelRole::Answer, "q?", decoding);
    REQUIRE_FALSE(reply.ok());
    CHECK(reply.error().code == Errc::BackendUnavailable);
}

TEST_CASE("endpoint prefixes resolve to the completions path") {
    std::string seen_path;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_path = req.path;
        res.set_content(completion_body("ok"), "application/json");
    });
    // Endpoint already ending in /v1 must not double the version segment.
    HttpBackendConfig cfg = config_for(server);
    cfg.endpoint = server.endpoint() + "/v1";
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg);
    REQUIRE(backend.ok());
    REQUIRE(backend.value()->complete(ModelRole::Answer, "q?", decoding).ok());
    CHECK(seen_path == "/v1/chat/completions");
}

TEST_CASE("config validation rejects malformed backends") {
    HttpBackendConfig cfg;
    cfg.model = "m";
    cfg.endpoint = "no-scheme.example.com";
    CHECK_FALSE(HttpBackend::create(cfg).ok());
    cfg.endpoint = "http://host.example.com";
    cfg.model = "";
    CHECK_FALSE(HttpBackend::create(cfg).ok());
    cfg.model = "m";
    cfg.max_in_flight = 0;
    CHECK_FALSE(HttpBackend::create(cfg).ok());
    cfg.max_in_flight = 300;
    CHECK_FALSE(HttpBackend::create(cfg).ok());
    cfg.max_in_flight = 4;
    cfg.max_attempts = 0;
    CHECK_FALSE(HttpBackend::create(cfg).ok());
    cfg.max_attempts = 3;
    cfg.timeout_ms = 0;
    CHECK_FALSE(HttpBackend::create(cfg).ok());
}

TEST_CASE("the admission gate bounds concurrent requests") {
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        int now = in_flight.fetch_add(1) + 1;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(30));
        in_flight.fetch_sub(1);
        res.set_content(completion_body("ok"), "application/json");
    });
    HttpBackendConfig cfg = config_for(server);
    cfg.max_in_flight = 2;
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg);
    REQUIRE(backend.ok());

    std::vector<std::thread> callers;
    std::atomic<int> failures{0};
    for (int i = 0; i < 6; ++i) {
        callers.emplace_back([&] {
            if (!backend.value()->complete(ModelRole::Answer, "q?", decoding).ok()) {
                failures.fetch_add(1);
            }
        });
    }
    for (std::thread& t : callers) t.join();
    CHECK(failures.load() == 0);
    CHECK(peak.load() <= 2);
    CHECK(peak.load() >= 1);
}
