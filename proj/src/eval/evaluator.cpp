#include "raisf/eval/evaluator.hpp"

#include <cmath>
#include <cstdio>

namespace raisf {

using nlohmann::json;

const char* to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::RaIsf: return "ra-isf";
    case Strategy::Direct: return "direct";
    case Strategy::Rag: return "rag";
    }
    return "ra-isf";
}

Result<Strategy> strategy_from_string(const std::string& name) {
    if (name == "ra-isf") return Strategy::RaIsf;
    if (name == "direct") return Strategy::Direct;
    if (name == "rag") return Strategy::Rag;
    return make_error(Errc::InvalidConfig,
                      "unknown strategy '" + name + "' (expected ra-isf, direct, or rag)");
}

namespace {

bool is_error_row(const PerQuestionResult& row) {
    return row.note.rfind("error:", 0) == 0;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-9; }

} // namespace

Status validate(const EvalReport& report) {
    if (report.strategy != "ra-isf" && report.strategy != "direct" &&
        report.strategy != "rag") {
        return make_error(Errc::InvalidParams, "report has unknown strategy");
    }
    if (report.num_questions != report.per_question.size() || report.num_questions == 0) {
        return make_error(Errc::InvalidParams,
                          "report row count does not match num_questions");
    }
    std::size_t correct = 0;
    std::size_t failed = 0;
    std::uint64_t retrievals = 0;
    std::uint64_t nodes = 0;
    for (const PerQuestionResult& row : report.per_question) {
        if (row.id.empty()) {
            return make_error(Errc::InvalidParams, "report row has empty id");
        }
        if (row.correct) ++correct;
        if (is_error_row(row)) ++failed;
        retrievals += row.retrieval_calls;
        nodes += row.node_count;
    }
    double n = static_cast<double>(report.num_questions);
    if (!close(report.em, static_cast<double>(correct) / n)) {
        return make_error(Errc::InvalidParams, "report em does not match rows");
    }
    if (!close(report.avg_retrievals, static_cast<double>(retrievals) / n)) {
        return make_error(Errc::InvalidParams,
                          "report avg_retrievals does not match rows");
    }
    if (!close(report.avg_nodes, static_cast<double>(nodes) / n)) {
        return make_error(Errc::InvalidParams, "report avg_nodes does not match rows");
    }
    if (report.failed_questions != failed) {
        return make_error(Errc::InvalidParams,
                          "report failed_questions does not match error rows");
    }
    return ok_status();
}

json report_to_json(const EvalReport& report) {
    json rows = json::array();
    for (const PerQuestionResult& row : report.per_question) {
        json r;
        r["id"] = row.id;
        r["answer"] = row.answer;
        r["correct"] = row.correct;
        r["retrieval_calls"] = row.retrieval_calls;
        r["node_count"] = row.node_count;
        r["note"] = row.note;
        rows.push_back(std::move(r));
    }
    json j;
    j["format"] = "raisf-eval-report";
    j["version"] = 1;
    j["strategy"] = report.strategy;
    j["dataset"] = report.dataset;
    j["num_questions"] = report.num_questions;
    j["em"] = report.em;
    j["avg_retrievals"] = report.avg_retrievals;
    j["avg_nodes"] = report.avg_nodes;
    j["failed_questions"] = report.failed_questions;
    j["per_question"] = std::move(rows);
    return j;
}

Result<EvalReport> report_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "raisf-eval-report" ||
        j.value("version", 0) != 1) {
        return make_error(Errc::InvalidParams, "not a raisf-eval-report document");
    }
    const char* str_keys[] = {"strategy", "dataset"};
    for (const char* key : str_keys) {
        if (!j.contains(key) || !j[key].is_string()) {
            return make_error(Errc::InvalidParams,
                              std::string("report missing string field '") + key + "'");
        }
    }
    const char* num_keys[] = {"num_questions", "em", "avg_retrievals", "avg_nodes",
                              "failed_questions"};
    for (const char* key : num_keys) {
        if (!j.contains(key) || !j[key].is_number()) {
            return make_error(Errc::InvalidParams,
                              std::string("report missing numeric field '") + key + "'");
        }
    }
    if (!j.contains("per_question") || !j["per_question"].is_array()) {
        return make_error(Errc::InvalidParams, "report missing per_question array");
    }
    EvalReport report;
    report.strategy = j["strategy"].get<std::string>();
    report.dataset = j["dataset"].get<std::string>();
    report.num_questions = j["num_questions"].get<std::size_t>();
    report.em = j["em"].get<double>();
    report.avg_retrievals = j["avg_retrievals"].get<double>();
    report.avg_nodes = j["avg_nodes"].get<double>();
    report.failed_questions = j["failed_questions"].get<std::size_t>();
    for (const json& r : j["per_question"]) {
        if (!r.is_object() || !r.contains("id") || !r["id"].is_string() ||
            !r.contains("answer") || !r["answer"].is_string() ||
            !r.contains("correct") || !r["correct"].is_boolean() ||
            !r.contains("retrieval_calls") || !r["retrieval_calls"].is_number_unsigned() ||
            !r.contains("node_count") || !r["node_count"].is_number_unsigned() ||
            !r.contains("note") || !r["note"].is_string()) {
            return make_error(Errc::InvalidParams, "report row is malformed");
        }
        PerQuestionResult row;
        row.id = r["id"].get<std::string>();
        row.answer = r["answer"].get<std::string>();
        row.correct = r["correct"].get<bool>();
        row.retrieval_calls = r["retrieval_calls"].get<std::uint64_t>();
        row.node_count = r["node_count"].get<std::uint64_t>();
        row.note = r["note"].get<std::string>();
        report.per_question.push_back(std::move(row));
    }
    Status valid = validate(report);
    if (!valid.ok()) return valid.error();
    return report;
}

std::string report_to_string(const EvalReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
    char buf[128];
    std::string out;
    out += "strategy        " + report.strategy + "\n";
    out += "dataset         " + report.dataset + "\n";
    std::snprintf(buf, sizeof(buf), "questions       %zu\n", report.num_questions);
    out += buf;
    std::snprintf(buf, sizeof(buf), "exact_match     %.4f\n", report.em);
    out += buf;
    std::snprintf(buf, sizeof(buf), "avg_retrievals  %.4f\n", report.avg_retrievals);
    out += buf;
    std::snprintf(buf, sizeof(buf), "avg_nodes       %.4f\n", report.avg_nodes);
    out += buf;
    std::snprintf(buf, sizeof(buf), "failed          %zu\n", report.failed_questions);
    out += buf;
    return out;
}

namespace {

void finish_report(EvalReport& report) {
    std::size_t correct = 0;
    std::uint64_t retrievals = 0;
    std::uint64_t nodes = 0;
    for (const PerQuestionResult& row : report.per_question) {
        if (row.correct) ++correct;
        retrievals += row.retrieval_calls;
        nodes += row.node_count;
    }
    double n = static_cast<double>(report.per_question.size());
    report.num_questions = report.per_question.size();
    report.em = static_cast<double>(correct) / n;
    report.avg_retrievals = static_cast<double>(retrievals) / n;
    report.avg_nodes = static_cast<double>(nodes) / n;
}

PerQuestionResult error_row(const QARecord& record, const Error& err) {
    PerQuestionResult row;
    row.id = record.id;
    row.correct = false;
    row.note = std::string("error: ") + errc_name(err.code) + ": " + err.message;
    return row;
}

Result<EvalReport> run_ra_isf(const EvalSetup& setup,
                              const std::vector<QARecord>& dataset,
                              EvalReport report) {
    Result<std::shared_ptr<Engine>> engine =
        Engine::create(setup.engine, setup.prompts, setup.backend, setup.retriever);
    if (!engine.ok()) return engine.error();

    std::vector<Question> questions;
    questions.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Result<Question> q = new_root_question(dataset[i].question, i);
        if (!q.ok()) return q.error();
        questions.push_back(std::move(q.value()));
    }

    std::vector<Result<SolveResult>> solved =
        engine.value()->solve_batch(questions, setup.parallelism);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!solved[i].ok()) {
            report.per_question.push_back(error_row(dataset[i], solved[i].error()));
            ++report.failed_questions;
            continue;
        }
        const SolveResult& result = solved[i].value();
        PerQuestionResult row;
        row.id = dataset[i].id;
        row.answer = result.answer.text;
        row.correct =
            exact_match(result.answer.text, dataset[i].gold_answers, setup.match_mode);
        row.retrieval_calls = result.trace.retrieval_calls;
        row.node_count = result.trace.node_count;
        report.per_question.push_back(std::move(row));
    }
    finish_report(report);
    return report;
}

Result<EvalReport> run_direct(const EvalSetup& setup,
                              const std::vector<QARecord>& dataset,
                              EvalReport report) {
    for (const QARecord& record : dataset) {
        Result<std::string> prompt =
            render_prompt(setup.prompts, PromptSite::AnswerDirect, record.question,
                          std::nullopt, std::nullopt, setup.engine.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();

        PerQuestionResult row;
        row.id = record.id;
        row.node_count = 1;
        Result<std::string> completion =
            setup.backend->complete(ModelRole::Answer, prompt.value(),
                                    setup.engine.decoding);
        if (completion.ok()) {
            row.answer = Answer::from_model_text(completion.value()).text;
            row.correct = exact_match(row.answer, record.gold_answers, setup.match_mode);
        } else if (completion.error().code == Errc::BackendRefusal) {
            row.answer = "unknown";
            row.note = "answer refused by backend";
        } else {
            row = error_row(record, completion.error());
            row.node_count = 1;
            ++report.failed_questions;
        }
        report.per_question.push_back(std::move(row));
    }
    finish_report(report);
    return report;
}

Result<EvalReport> run_rag(const EvalSetup& setup,
                           const std::vector<QARecord>& dataset,
                           EvalReport report) {
    for (const QARecord& record : dataset) {
        PerQuestionResult row;
        row.id = record.id;
        row.node_count = 1;
        row.retrieval_calls = 1;

        Result<std::vector<Passage>> retrieved =
            setup.retriever->retrieve(record.question, setup.engine.k_passages,
                                      setup.engine.retrieval_length_l);
        std::optional<std::vector<Passage>> passages;
        if (!retrieved.ok()) {
            row.note = "retrieval failed: " + retrieved.error().message;
        } else if (retrieved.value().empty()) {
            row.note = "retrieval returned no passages";
        } else {
            passages = std::move(retrieved.value());
        }

        PromptSite site =
            passages.has_value() ? PromptSite::AnswerWithPassages : PromptSite::AnswerDirect;
        Result<std::string> prompt =
            render_prompt(setup.prompts, site, record.question, passages, std::nullopt,
                          setup.engine.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();

        Result<std::string> completion =
            setup.backend->complete(ModelRole::Answer, prompt.value(),
                                    setup.engine.decoding);
        if (completion.ok()) {
            row.answer = Answer::from_model_text(completion.value()).text;
            row.correct = exact_match(row.answer, record.gold_answers, setup.match_mode);
        } else if (completion.error().code == Errc::BackendRefusal) {
            row.answer = "unknown";
            row.note = "answer refused by backend";
        } else {
            row = error_row(record, completion.error());
            row.node_count = 1;
            row.retrieval_calls = 1;
            ++report.failed_questions;
        }
        report.per_question.push_back(std::move(row));
    }
    finish_report(report);
    return report;
}

} // namespace

Result<EvalReport> run_eval(const EvalSetup& setup,
                            const std::vector<QARecord>& dataset,
                            Strategy strategy) {
    if (!setup.backend) {
        return make_error(Errc::InvalidParams, "eval setup has no backend");
    }
    if (strategy == Strategy::Rag && !setup.retriever) {
        return make_error(Errc::InvalidParams, "rag strategy requires a retriever");
    }
    if (dataset.empty()) {
        return make_error(Errc::InvalidParams, "dataset is empty");
    }
    for (const QARecord& record : dataset) {
        Status valid = validate(record);
        if (!valid.ok()) return valid.error();
    }

    EvalReport report;
    report.strategy = to_string(strategy);
    report.dataset = setup.dataset_name;
    switch (strategy) {
    case Strategy::RaIsf: return run_ra_isf(setup, dataset, std::move(report));
    case Strategy::Direct: return run_direct(setup, dataset, std::move(report));
    case Strategy::Rag: return run_rag(setup, dataset, std::move(report));
    }
    return make_error(Errc::InvalidParams, "unknown strategy");
}

Result<std::vector<SweepPoint>> sweep_dth(const EvalSetup& setup,
                                          const std::vector<QARecord>& dataset,
                                          const std::vector<int>& values) {
    if (values.empty()) {
        return make_error(Errc::InvalidParams, "sweep needs at least one value");
    }
    std::vector<SweepPoint> points;
    for (int v : values) {
        EvalSetup local = setup;
        local.engine.d_th = v;
        Result<EvalReport> report = run_eval(local, dataset, Strategy::RaIsf);
        if (!report.ok()) return report.error();
        points.push_back({v, std::move(report.value())});
    }
    return points;
}

Result<std::vector<SweepPoint>> sweep_k(const EvalSetup& setup,
                                        const std::vector<QARecord>& dataset,
                                        const std::vector<int>& values) {
    if (values.empty()) {
        return make_error(Errc::InvalidParams, "sweep needs at least one value");
    }
    std::vector<SweepPoint> points;
    for (int v : values) {
        EvalSetup local = setup;
        local.engine.k_passages = v;
        Result<EvalReport> report = run_eval(local, dataset, Strategy::RaIsf);
        if (!report.ok()) return report.error();
        points.push_back({v, std::move(report.value())});
    }
    return points;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
    std::string out = "param,em,avg_retrievals,avg_nodes\n";
    char buf[128];
    for (const SweepPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", p.param, p.report.em,
                      p.report.avg_retrievals, p.report.avg_nodes);
        out += buf;
    }
    return out;
}

} // namespace raisf
