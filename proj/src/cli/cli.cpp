#include "raisf/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "raisf/backends/scripted_backend.hpp"
#include "raisf/datacollect/collect.hpp"
#include "raisf/engine/engine.hpp"
#include "raisf/eval/evaluator.hpp"
#include "raisf/eval/oracle.hpp"
#include "raisf/retrieval/index.hpp"

namespace raisf {

using nlohmann::json;

namespace {

int exit_code_for(const Error& err) {
    return err.code == Errc::BackendUnavailable ? 2 : 1;
}

Status write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        return make_error(Errc::IoError, "cannot write " + path);
    }
    out << content;
    if (!out) {
        return make_error(Errc::IoError, "write failed: " + path);
    }
    return ok_status();
}

Result<std::vector<CorpusDoc>> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open corpus: " + path);
    }
    std::vector<CorpusDoc> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("doc_id") ||
            !j["doc_id"].is_string() || !j.contains("text") || !j["text"].is_string()) {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) +
                                  ": expected {doc_id, text}");
        }
        docs.push_back({j["doc_id"].get<std::string>(), j["text"].get<std::string>()});
    }
    if (docs.empty()) {
        return make_error(Errc::EmptyCorpus, "corpus has no documents: " + path);
    }
    return docs;
}

const char* kPromptSiteNames[] = {
    "know_probe", "answer_direct", "answer_with_passages",
    "relevance_probe", "decompose", "aggregate",
};

std::string* catalog_slot(PromptCatalog& catalog, const std::string& name) {
    if (name == "know_probe") return &catalog.know_probe;
    if (name == "answer_direct") return &catalog.answer_direct;
    if (name == "answer_with_passages") return &catalog.answer_with_passages;
    if (name == "relevance_probe") return &catalog.relevance_probe;
    if (name == "decompose") return &catalog.decompose;
    if (name == "aggregate") return &catalog.aggregate;
    return nullptr;
}

Result<RelevanceMode> relevance_mode_from_string(const std::string& name) {
    if (name == "batch") return RelevanceMode::Batch;
    if (name == "per_passage") return RelevanceMode::PerPassage;
    return make_error(Errc::InvalidConfig,
                      "unknown relevance_mode '" + name +
                          "' (expected batch or per_passage)");
}

Result<BackendSettings> backend_settings_from_json(const json& j) {
    if (!j.is_object()) {
        return make_error(Errc::InvalidConfig, "backend section must be an object");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
        return make_error(Errc::InvalidConfig, "backend section needs a string 'kind'");
    }
    BackendSettings settings;
    settings.kind = j["kind"].get<std::string>();
    if (settings.kind == "scripted") {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() != "kind" && it.key() != "behavior_path") {
                return make_error(Errc::InvalidConfig,
                                  "unknown scripted backend key '" + it.key() + "'");
            }
        }
        if (!j.contains("behavior_path") || !j["behavior_path"].is_string() ||
            j["behavior_path"].get<std::string>().empty()) {
            return make_error(Errc::InvalidConfig,
                              "scripted backend requires behavior_path");
        }
        settings.behavior_path = j["behavior_path"].get<std::string>();
        return settings;
    }
    if (settings.kind != "http") {
        return make_error(Errc::InvalidConfig,
                          "backend kind must be 'scripted' or 'http'");
    }
    const char* known[] = {"kind",          "endpoint",       "model",
                           "role_models",   "api_key_env",    "max_in_flight",
                           "max_attempts",  "initial_backoff_ms", "timeout_ms"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return it.key() == k;
            }) == std::end(known)) {
            return make_error(Errc::InvalidConfig,
                              "unknown http backend key '" + it.key() + "'");
        }
    }
    if (!j.contains("endpoint") || !j["endpoint"].is_string() ||
        !j.contains("model") || !j["model"].is_string()) {
        return make_error(Errc::InvalidConfig,
                          "http backend requires endpoint and model");
    }
    settings.http.endpoint = j["endpoint"].get<std::string>();
    settings.http.model = j["model"].get<std::string>();
    if (j.contains("role_models")) {
        if (!j["role_models"].is_object()) {
            return make_error(Errc::InvalidConfig, "role_models must be an object");
        }
        for (auto it = j["role_models"].begin(); it != j["role_models"].end(); ++it) {
            if (!it.value().is_string()) {
                return make_error(Errc::InvalidConfig, "role_models values must be strings");
            }
            settings.http.role_models[it.key()] = it.value().get<std::string>();
        }
    }
    if (j.contains("api_key_env")) {
        if (!j["api_key_env"].is_string()) {
            return make_error(Errc::InvalidConfig, "api_key_env must be a string");
        }
        settings.http.api_key_env = j["api_key_env"].get<std::string>();
    }
    struct IntField { const char* key; int* slot; };
    IntField ints[] = {{"max_in_flight", &settings.http.max_in_flight},
                       {"max_attempts", &settings.http.max_attempts},
                       {"initial_backoff_ms", &settings.http.initial_backoff_ms},
                       {"timeout_ms", &settings.http.timeout_ms}};
    for (const IntField& f : ints) {
        if (!j.contains(f.key)) continue;
        if (!j[f.key].is_number_integer()) {
            return make_error(Errc::InvalidConfig,
                              std::string("backend ") + f.key + " must be an integer");
        }
        *f.slot = j[f.key].get<int>();
    }
    return settings;
}

json backend_settings_to_json(const BackendSettings& settings) {
    json j;
    j["kind"] = settings.kind;
    if (settings.kind == "scripted") {
        j["behavior_path"] = settings.behavior_path;
        return j;
    }
    j["endpoint"] = settings.http.endpoint;
    j["model"] = settings.http.model;
    if (!settings.http.role_models.empty()) {
        json models;
        for (const auto& [role, model] : settings.http.role_models) {
            models[role] = model;
        }
        j["role_models"] = std::move(models);
    }
    if (!settings.http.api_key_env.empty()) {
        j["api_key_env"] = settings.http.api_key_env;
    }
    j["max_in_flight"] = settings.http.max_in_flight;
    j["max_attempts"] = settings.http.max_attempts;
    j["initial_backoff_ms"] = settings.http.initial_backoff_ms;
    j["timeout_ms"] = settings.http.timeout_ms;
    return j;
}

} // namespace

Result<RunConfig> run_config_from_json(const json& j) {
    if (!j.is_object()) {
        return make_error(Errc::InvalidConfig, "config root must be an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key != "engine" && key != "backend" && key != "retriever" &&
            key != "prompts" && key != "relevance_mode") {
            return make_error(Errc::InvalidConfig, "unknown config key '" + key + "'");
        }
    }
    RunConfig cfg;
    if (j.contains("engine")) {
        Result<EngineConfig> engine = engine_config_from_json(j["engine"]);
        if (!engine.ok()) return engine.error();
        cfg.engine = engine.value();
    }
    if (j.contains("relevance_mode")) {
        if (!j["relevance_mode"].is_string()) {
            return make_error(Errc::InvalidConfig, "relevance_mode must be a string");
        }
        Result<RelevanceMode> mode =
            relevance_mode_from_string(j["relevance_mode"].get<std::string>());
        if (!mode.ok()) return mode.error();
        if (j.contains("engine") && j["engine"].is_object() &&
            j["engine"].contains("relevance_mode") &&
            cfg.engine.relevance_mode != mode.value()) {
            return make_error(Errc::InvalidConfig,
                              "relevance_mode set to conflicting values at top level "
                              "and in the engine section");
        }
        cfg.engine.relevance_mode = mode.value();
    }
    if (j.contains("backend")) {
        Result<BackendSettings> backend = backend_settings_from_json(j["backend"]);
        if (!backend.ok()) return backend.error();
        cfg.backend = backend.value();
        cfg.has_backend = true;
    }
    if (j.contains("retriever")) {
        const json& r = j["retriever"];
        if (!r.is_object() || !r.contains("index_path") || !r["index_path"].is_string()) {
            return make_error(Errc::InvalidConfig,
                              "retriever section needs a string index_path");
        }
        for (auto it = r.begin(); it != r.end(); ++it) {
            if (it.key() != "index_path") {
                return make_error(Errc::InvalidConfig,
                                  "unknown retriever key '" + it.key() + "'");
            }
        }
        cfg.index_path = r["index_path"].get<std::string>();
    }
    if (j.contains("prompts")) {
        const json& p = j["prompts"];
        if (!p.is_object()) {
            return make_error(Errc::InvalidConfig, "prompts section must be an object");
        }
        for (auto it = p.begin(); it != p.end(); ++it) {
            bool known = std::find_if(std::begin(kPromptSiteNames),
                                      std::end(kPromptSiteNames), [&](const char* n) {
                                          return it.key() == n;
                                      }) != std::end(kPromptSiteNames);
            if (!known) {
                return make_error(Errc::InvalidConfig,
                                  "unknown prompt override '" + it.key() + "'");
            }
            if (!it.value().is_string() || it.value().get<std::string>().empty()) {
                return make_error(Errc::InvalidConfig,
                                  "prompt override '" + it.key() +
                                      "' must be a non-empty string");
            }
            cfg.prompt_overrides[it.key()] = it.value().get<std::string>();
        }
    }
    Status valid = validate(cfg.engine);
    if (!valid.ok()) return valid.error();
    return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["engine"] = engine_config_to_json(cfg.engine);
    if (cfg.has_backend) {
        j["backend"] = backend_settings_to_json(cfg.backend);
    }
    if (!cfg.index_path.empty()) {
        j["retriever"] = json{{"index_path", cfg.index_path}};
    }
    if (!cfg.prompt_overrides.empty()) {
        json p;
        for (const auto& [name, text] : cfg.prompt_overrides) {
            p[name] = text;
        }
        j["prompts"] = std::move(p);
    }
    return j;
}

Result<RunConfig> load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open config: " + path);
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        return make_error(Errc::InvalidConfig, "config is not valid JSON: " + path);
    }
    return run_config_from_json(j);
}

Result<PromptCatalog> catalog_with_overrides(
    const std::map<std::string, std::string>& overrides) {
    PromptCatalog catalog = PromptCatalog::defaults();
    for (const auto& [name, text] : overrides) {
        std::string* slot = catalog_slot(catalog, name);
        if (!slot) {
            return make_error(Errc::InvalidConfig,
                              "unknown prompt override '" + name + "'");
        }
        if (text.empty()) {
            return make_error(Errc::InvalidConfig,
                              "prompt override '" + name + "' is empty");
        }
        *slot = text;
    }
    return catalog;
}

Result<std::shared_ptr<ModelBackend>> make_backend(const RunConfig& cfg) {
    if (!cfg.has_backend) {
        return make_error(Errc::InvalidConfig, "config has no backend section");
    }
    if (cfg.backend.kind == "scripted") {
        Result<ScriptedBehavior> behavior =
            load_scripted_behavior(cfg.backend.behavior_path);
        if (!behavior.ok()) return behavior.error();
        return std::shared_ptr<ModelBackend>(
            std::make_shared<ScriptedBackend>(std::move(behavior.value())));
    }
    Result<std::shared_ptr<HttpBackend>> backend = HttpBackend::create(cfg.backend.http);
    if (!backend.ok()) return backend.error();
    return std::shared_ptr<ModelBackend>(backend.value());
}

Result<std::shared_ptr<Retriever>> make_retriever(const RunConfig& cfg) {
    if (cfg.index_path.empty()) {
        return make_error(Errc::InvalidConfig,
                          "config has no retriever section with an index_path");
    }
    Result<PassageIndex> index = PassageIndex::load(cfg.index_path);
    if (!index.ok()) return index.error();
    return std::shared_ptr<Retriever>(
        std::make_shared<Bm25Retriever>(std::move(index.value())));
}

namespace {

struct EngineParts {
    RunConfig cfg;
    PromptCatalog prompts;
    std::shared_ptr<ModelBackend> backend;
    std::shared_ptr<Retriever> retriever;
};

// Loads everything solve/eval/sweep need. The retriever is only constructed
// when an index is configured; downstream validation decides whether one is
// required for the requested mode.
Result<EngineParts> load_engine_parts(const std::string& config_path) {
    Result<RunConfig> cfg = load_run_config(config_path);
    if (!cfg.ok()) return cfg.error();
    EngineParts parts;
    parts.cfg = std::move(cfg.value());
    Result<PromptCatalog> prompts = catalog_with_overrides(parts.cfg.prompt_overrides);
    if (!prompts.ok()) return prompts.error();
    parts.prompts = std::move(prompts.value());
    Result<std::shared_ptr<ModelBackend>> backend = make_backend(parts.cfg);
    if (!backend.ok()) return backend.error();
    parts.backend = std::move(backend.value());
    if (!parts.cfg.index_path.empty()) {
        Result<std::shared_ptr<Retriever>> retriever = make_retriever(parts.cfg);
        if (!retriever.ok()) return retriever.error();
        parts.retriever = std::move(retriever.value());
    }
    return parts;
}

int fail(std::ostream& err, const Error& e) {
    err << "error: " << e.message << "\n";
    return exit_code_for(e);
}

int cmd_index_build(const std::string& corpus_path, const std::string& out_path,
                    std::ostream& out, std::ostream& err) {
    Result<std::vector<CorpusDoc>> corpus = load_corpus_jsonl(corpus_path);
    if (!corpus.ok()) return fail(err, corpus.error());
    Result<PassageIndex> index = PassageIndex::build(corpus.value());
    if (!index.ok()) return fail(err, index.error());
    Status saved = index.value().save(out_path);
    if (!saved.ok()) {
        err << "error: " << saved.error().message << "\n";
        return 2;
    }
    out << "indexed " << corpus.value().size() << " documents into "
        << index.value().num_chunks() << " chunks ("
        << index.value().vocabulary_size() << " terms), wrote " << out_path << "\n";
    return 0;
}

int cmd_solve(const std::string& config_path, const std::string& question,
              const std::string& trace_out, std::ostream& out, std::ostream& err) {
    Result<EngineParts> parts = load_engine_parts(config_path);
    if (!parts.ok()) return fail(err, parts.error());
    Result<std::shared_ptr<Engine>> engine =
        Engine::create(parts.value().cfg.engine, parts.value().prompts,
                       parts.value().backend, parts.value().retriever);
    if (!engine.ok()) return fail(err, engine.error());
    Result<Question> root = new_root_question(question, 0);
    if (!root.ok()) return fail(err, root.error());
    Result<SolveResult> solved = engine.value()->solve(root.value());
    if (!solved.ok()) return fail(err, solved.error());

    const SolveResult& result = solved.value();
    out << result.answer.text << "\n";
    err << "branch=" << to_string(result.trace.branch)
        << " nodes=" << result.trace.node_count
        << " retrievals=" << result.trace.retrieval_calls << "\n";
    if (!trace_out.empty()) {
        Status written = write_text_file(trace_out, trace_to_string(result.trace));
        if (!written.ok()) {
            err << "error: " << written.error().message << "\n";
            return 2;
        }
        err << "trace written to " << trace_out << "\n";
    }
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& dataset_path,
             const std::string& strategy_name, const std::string& ablation_spec,
             const std::string& report_path, const std::string& report_text_path,
             bool strict_em, int parallelism, std::ostream& out, std::ostream& err) {
    Result<EngineParts> parts = load_engine_parts(config_path);
    if (!parts.ok()) return fail(err, parts.error());
    Result<Strategy> strategy = strategy_from_string(strategy_name);
    if (!strategy.ok()) return fail(err, strategy.error());
    Result<std::vector<QARecord>> dataset = load_qa_jsonl(dataset_path);
    if (!dataset.ok()) return fail(err, dataset.error());

    EvalSetup setup;
    setup.engine = parts.value().cfg.engine;
    if (!ablation_spec.empty()) {
        Result<AblationSet> ablation = parse_ablation_list(ablation_spec);
        if (!ablation.ok()) return fail(err, ablation.error());
        setup.engine.ablation = ablation.value();
    }
    setup.prompts = parts.value().prompts;
    setup.backend = parts.value().backend;
    setup.retriever = parts.value().retriever;
    setup.match_mode = strict_em ? MatchMode::Strict : MatchMode::Containment;
    setup.parallelism = parallelism;
    setup.dataset_name = dataset_path;

    Result<EvalReport> report = run_eval(setup, dataset.value(), strategy.value());
    if (!report.ok()) return fail(err, report.error());

    out << report_to_text(report.value());
    if (!report_path.empty()) {
        Status written = write_text_file(report_path, report_to_string(report.value()));
        if (!written.ok()) {
            err << "error: " << written.error().message << "\n";
            return 2;
        }
        err << "report written to " << report_path << "\n";
    }
    if (!report_text_path.empty()) {
        Status written = write_text_file(report_text_path, report_to_text(report.value()));
        if (!written.ok()) {
            err << "error: " << written.error().message << "\n";
            return 2;
        }
    }
    if (report.value().failed_questions > 0) {
        err << report.value().failed_questions
            << " question(s) failed; report is partial\n";
        return 2;
    }
    return 0;
}

Result<std::vector<int>> parse_int_list(const std::string& spec) {
    std::vector<int> values;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::string t = trim_copy(item);
        if (t.empty()) continue;
        try {
            std::size_t pos = 0;
            int v = std::stoi(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
            values.push_back(v);
        } catch (const std::exception&) {
            return make_error(Errc::InvalidParams, "bad integer '" + t + "' in list");
        }
    }
    if (values.empty()) {
        return make_error(Errc::InvalidParams, "value list is empty");
    }
    return values;
}

int cmd_sweep(const std::string& kind, const std::string& config_path,
              const std::string& dataset_path, const std::string& values_spec,
              const std::string& out_path, int parallelism, std::ostream& out,
              std::ostream& err) {
    Result<EngineParts> parts = load_engine_parts(config_path);
    if (!parts.ok()) return fail(err, parts.error());
    Result<std::vector<int>> values = parse_int_list(values_spec);
    if (!values.ok()) return fail(err, values.error());
    Result<std::vector<QARecord>> dataset = load_qa_jsonl(dataset_path);
    if (!dataset.ok()) return fail(err, dataset.error());

    EvalSetup setup;
    setup.engine = parts.value().cfg.engine;
    setup.prompts = parts.value().prompts;
    setup.backend = parts.value().backend;
    setup.retriever = parts.value().retriever;
    setup.parallelism = parallelism;
    setup.dataset_name = dataset_path;

    Result<std::vector<SweepPoint>> points =
        kind == "dth" ? sweep_dth(setup, dataset.value(), values.value())
                      : sweep_k(setup, dataset.value(), values.value());
    if (!points.ok()) return fail(err, points.error());

    std::string csv = sweep_to_csv(points.value());
    if (out_path.empty()) {
        out << csv;
    } else {
        Status written = write_text_file(out_path, csv);
        if (!written.ok()) {
            err << "error: " << written.error().message << "\n";
            return 2;
        }
        err << "sweep written to " << out_path << "\n";
    }
    std::size_t failed = 0;
    for (const SweepPoint& p : points.value()) failed += p.report.failed_questions;
    if (failed > 0) {
        err << failed << " question run(s) failed across the sweep\n";
        return 2;
    }
    return 0;
}

int cmd_collect(const std::string& task, const std::string& config_path,
                const std::string& dataset_path, const std::string& out_path,
                int sample, std::uint64_t seed, int k, bool strict_em,
                int parallelism, std::ostream& out, std::ostream& err) {
    Result<EngineParts> parts = load_engine_parts(config_path);
    if (!parts.ok()) return fail(err, parts.error());
    Result<std::vector<QARecord>> dataset = load_qa_jsonl(dataset_path);
    if (!dataset.ok()) return fail(err, dataset.error());
    std::vector<QARecord> records = dataset.value();
    if (sample > 0) {
        records = sample_records(records, static_cast<std::size_t>(sample), seed);
    }

    CollectOptions opts;
    opts.prompts = parts.value().prompts;
    opts.decoding = parts.value().cfg.engine.decoding;
    opts.retrieval_length_l = parts.value().cfg.engine.retrieval_length_l;
    opts.parallelism = parallelism;
    opts.strict_em = strict_em;

    Result<CollectOutcome> outcome =
        make_error(Errc::InvalidParams, "unknown collect task");
    if (task == "know") {
        outcome = collect_know(records, *parts.value().backend, opts);
    } else if (task == "rel") {
        if (!parts.value().retriever) {
            return fail(err, make_error(Errc::InvalidConfig,
                                        "collect rel requires a retriever index"));
        }
        int effective_k = k > 0 ? k : parts.value().cfg.engine.k_passages;
        outcome = collect_rel(records, *parts.value().retriever,
                              *parts.value().backend, effective_k, opts);
    } else if (task == "decom") {
        outcome = collect_decom(records, *parts.value().backend, opts);
    }
    if (!outcome.ok()) return fail(err, outcome.error());

    for (const std::string& skip : outcome.value().skips) {
        err << "skipped: " << skip << "\n";
    }
    Status written = write_training_jsonl(outcome.value().records, out_path);
    if (!written.ok()) {
        err << "error: " << written.error().message << "\n";
        return 2;
    }
    out << "collected " << outcome.value().records.size() << " records ("
        << outcome.value().skips.size() << " skipped), wrote " << out_path << "\n";
    if (outcome.value().records.empty()) {
        err << "no records collected\n";
        return 2;
    }
    return 0;
}

int cmd_oracle_generate(const OracleParams& params, const std::string& out_dir,
                        std::ostream& out, std::ostream& err) {
    Result<OracleWorld> world = generate_oracle_world(params);
    if (!world.ok()) return fail(err, world.error());
    Status written = write_oracle_world(world.value(), out_dir);
    if (!written.ok()) return fail(err, written.error());

    RunConfig cfg;
    cfg.has_backend = true;
    cfg.backend.kind = "scripted";
    cfg.backend.behavior_path = out_dir + "/behavior.json";
    cfg.index_path = out_dir + "/index.json";
    Status config_written =
        write_text_file(out_dir + "/config.json", run_config_to_json(cfg).dump(2) + "\n");
    if (!config_written.ok()) return fail(err, config_written.error());

    out << "oracle world: " << world.value().composites.size() << " composites, "
        << world.value().facts.size() << " facts, " << world.value().corpus.size()
        << " corpus docs, written to " << out_dir << "\n";
    err << "next: index build --corpus " << out_dir << "/corpus.jsonl --out "
        << out_dir << "/index.json\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"retrieval-augmented iterative self-feedback toolkit", "raisf"};
    app.require_subcommand(0, 1);

    std::string top_config;
    bool print_config = false;
    app.add_option("--config", top_config, "run configuration JSON file");
    app.add_flag("--print-config", print_config,
                 "print the canonical configuration and exit");

    // index build
    CLI::App* index_cmd = app.add_subcommand("index", "passage index maintenance");
    index_cmd->require_subcommand(1);
    CLI::App* index_build = index_cmd->add_subcommand("build", "build a BM25 index");
    std::string corpus_path, index_out;
    index_build->add_option("--corpus", corpus_path, "corpus JSONL ({doc_id, text})")
        ->required();
    index_build->add_option("--out", index_out, "output index path")->required();

    // solve
    CLI::App* solve_cmd = app.add_subcommand("solve", "answer a single question");
    std::string solve_config, solve_question, trace_out;
    solve_cmd->add_option("--config", solve_config, "run configuration")->required();
    solve_cmd->add_option("--question", solve_question, "question text")->required();
    solve_cmd->add_option("--trace-out", trace_out, "write the solve trace JSON here");

    // eval run
    CLI::App* eval_cmd = app.add_subcommand("eval", "batch evaluation");
    eval_cmd->require_subcommand(1);
    CLI::App* eval_run = eval_cmd->add_subcommand("run", "evaluate a dataset");
    std::string eval_config, eval_dataset, eval_strategy = "ra-isf";
    std::string eval_ablation, eval_report, eval_report_text;
    bool eval_strict = false;
    int eval_parallelism = 1;
    eval_run->add_option("--config", eval_config, "run configuration")->required();
    eval_run->add_option("--dataset", eval_dataset, "dataset JSONL")->required();
    eval_run->add_option("--strategy", eval_strategy, "ra-isf, direct, or rag");
    eval_run->add_option("--ablation", eval_ablation,
                         "comma-separated: no-skm,no-prm,no-qdm (replaces config)");
    eval_run->add_option("--report", eval_report, "write the JSON report here");
    eval_run->add_option("--report-text", eval_report_text,
                         "write the plain-text report here");
    eval_run->add_flag("--strict-em", eval_strict, "strict-equality exact match");
    eval_run->add_option("--parallelism", eval_parallelism, "solver worker count")
        ->check(CLI::Range(1, 64));

    // sweep dth|k
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps");
    sweep_cmd->require_subcommand(1);
    std::string sweep_config, sweep_dataset, sweep_values, sweep_out;
    int sweep_parallelism = 1;
    auto add_sweep_opts = [&](CLI::App* sub) {
        sub->add_option("--config", sweep_config, "run configuration")->required();
        sub->add_option("--dataset", sweep_dataset, "dataset JSONL")->required();
        sub->add_option("--values", sweep_values, "comma-separated values")->required();
        sub->add_option("--out", sweep_out, "write CSV here (default stdout)");
        sub->add_option("--parallelism", sweep_parallelism, "solver worker count")
            ->check(CLI::Range(1, 64));
    };
    CLI::App* sweep_dth_cmd =
        sweep_cmd->add_subcommand("dth", "sweep the decomposition depth threshold");
    add_sweep_opts(sweep_dth_cmd);
    CLI::App* sweep_k_cmd = sweep_cmd->add_subcommand("k", "sweep retrieval depth k");
    add_sweep_opts(sweep_k_cmd);

    // collect know|rel|decom
    CLI::App* collect_cmd = app.add_subcommand("collect", "training data collection");
    collect_cmd->require_subcommand(1);
    std::string collect_config, collect_dataset, collect_out;
    int collect_sample = 0;
    std::uint64_t collect_seed = 0;
    int collect_k = 0;
    bool collect_strict = false;
    int collect_parallelism = 1;
    auto add_collect_opts = [&](CLI::App* sub) {
        sub->add_option("--config", collect_config, "run configuration")->required();
        sub->add_option("--dataset", collect_dataset, "QA dataset JSONL")->required();
        sub->add_option("--out", collect_out, "output training JSONL")->required();
        sub->add_option("--sample", collect_sample,
                        "sample this many records before collecting")
            ->check(CLI::Range(1, 1000000));
        sub->add_option("--seed", collect_seed, "sampling seed");
        sub->add_option("--parallelism", collect_parallelism, "teacher worker count")
            ->check(CLI::Range(1, 64));
    };
    CLI::App* collect_know_cmd =
        collect_cmd->add_subcommand("know", "self-knowledge labels");
    add_collect_opts(collect_know_cmd);
    collect_know_cmd->add_flag("--strict-em", collect_strict,
                               "strict-equality exact match for labels");
    CLI::App* collect_rel_cmd =
        collect_cmd->add_subcommand("rel", "passage relevance labels");
    add_collect_opts(collect_rel_cmd);
    collect_rel_cmd->add_option("--k", collect_k,
                                "passages per question (default: engine k)")
        ->check(CLI::Range(1, 1000));
    CLI::App* collect_decom_cmd =
        collect_cmd->add_subcommand("decom", "decomposition targets");
    add_collect_opts(collect_decom_cmd);

    // oracle generate
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "synthetic oracle worlds");
    oracle_cmd->require_subcommand(1);
    CLI::App* oracle_generate =
        oracle_cmd->add_subcommand("generate", "generate a seeded oracle world");
    OracleParams oracle_params;
    std::string oracle_dir;
    oracle_generate->add_option("--seed", oracle_params.seed, "world seed");
    oracle_generate
        ->add_option("--composites", oracle_params.num_composites,
                     "number of composite questions")
        ->check(CLI::Range(1, 10000000));
    oracle_generate
        ->add_option("--max-facts", oracle_params.max_facts_per_composite,
                     "max facts per composite")
        ->check(CLI::Range(1, 64));
    oracle_generate->add_option("--p-know", oracle_params.p_know,
                                "per-fact closed-book knowledge probability")
        ->check(CLI::Range(0.0, 1.0));
    oracle_generate->add_option("--p-corpus", oracle_params.p_corpus,
                                "per-fact corpus coverage probability")
        ->check(CLI::Range(0.0, 1.0));
    oracle_generate
        ->add_option("--max-distractors", oracle_params.max_distractors,
                     "max distractor docs per fact")
        ->check(CLI::Range(0, 64));
    oracle_generate->add_option("--out-dir", oracle_dir, "output directory (must exist)")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 1;
    }

    if (print_config) {
        RunConfig cfg;
        if (!top_config.empty()) {
            Result<RunConfig> loaded = load_run_config(top_config);
            if (!loaded.ok()) return fail(err, loaded.error());
            cfg = loaded.value();
        }
        out << run_config_to_json(cfg).dump(2) << "\n";
        return 0;
    }

    if (index_build->parsed()) {
        return cmd_index_build(corpus_path, index_out, out, err);
    }
    if (solve_cmd->parsed()) {
        return cmd_solve(solve_config, solve_question, trace_out, out, err);
    }
    if (eval_run->parsed()) {
        return cmd_eval(eval_config, eval_dataset, eval_strategy, eval_ablation,
                        eval_report, eval_report_text, eval_strict, eval_parallelism,
                        out, err);
    }
    if (sweep_dth_cmd->parsed() || sweep_k_cmd->parsed()) {
        return cmd_sweep(sweep_dth_cmd->parsed() ? "dth" : "k", sweep_config,
                         sweep_dataset, sweep_values, sweep_out, sweep_parallelism,
                         out, err);
    }
    if (collect_know_cmd->parsed() || collect_rel_cmd->parsed() ||
        collect_decom_cmd->parsed()) {
        std::string task = collect_know_cmd->parsed()
                               ? "know"
                               : (collect_rel_cmd->parsed() ? "rel" : "decom");
        return cmd_collect(task, collect_config, collect_dataset, collect_out,
                           collect_sample, collect_seed, collect_k, collect_strict,
                           collect_parallelism, out, err);
    }
    if (oracle_generate->parsed()) {
        return cmd_oracle_generate(oracle_params, oracle_dir, out, err);
    }

    err << app.help();
    return 1;
}

} // namespace raisf
