#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "raisf/backends/backend.hpp"
#include "raisf/backends/http_backend.hpp"
#include "raisf/backends/prompts.hpp"
#include "raisf/core/config.hpp"
#include "raisf/core/result.hpp"
#include "raisf/retrieval/retriever.hpp"

namespace raisf {

struct BackendSettings {
    std::string kind = "scripted";  // "scripted" | "http"
    std::string behavior_path;      // scripted backends
    HttpBackendConfig http;         // http backends
};

// Top-level run configuration, loaded from a JSON file. Sections: "engine",
// "backend", "retriever" {"index_path"}, "prompts" (template overrides keyed
// by site name). All sections are optional in the file; subcommands check
// for what they need.
struct RunConfig {
    EngineConfig engine;
    BackendSettings backend;
    bool has_backend = false;
    std::string index_path;
    std::map<std::string, std::string> prompt_overrides;
};

Result<RunConfig> run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);
Result<RunConfig> load_run_config(const std::string& path);

// Applies template overrides onto the default catalog.
Result<PromptCatalog> catalog_with_overrides(
    const std::map<std::string, std::string>& overrides);

// Instantiates the configured backend / retriever. The retriever requires
// index_path to name a saved passage index.
Result<std::shared_ptr<ModelBackend>> make_backend(const RunConfig& cfg);
Result<std::shared_ptr<Retriever>> make_retriever(const RunConfig& cfg);

// Entry point behind the binary; argv excludes the program name. Returns the
// process exit code: 0 success, 1 usage/config errors, 2 runtime failures
// (a partial report is still written when possible).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace raisf
