#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "raisf/datacollect/collect.hpp"
#include "raisf/engine/engine.hpp"
#include "raisf/eval/exact_match.hpp"

namespace raisf {

enum class Strategy {
    RaIsf,   // full iterative loop
    Direct,  // closed-book single completion
    Rag,     // one retrieval, all passages in context, no filtering
};

const char* to_string(Strategy strategy);
Result<Strategy> strategy_from_string(const std::string& name);

struct PerQuestionResult {
    std::string id;
    std::string answer;
    bool correct = false;
    std::uint64_t retrieval_calls = 0;
    std::uint64_t node_count = 0;
    std::string note;
};

struct EvalReport {
    std::string strategy;
    std::string dataset;
    std::size_t num_questions = 0;
    double em = 0.0;
    double avg_retrievals = 0.0;
    double avg_nodes = 0.0;
    std::size_t failed_questions = 0;
    std::vector<PerQuestionResult> per_question;
};

// Recomputes the aggregates from the rows and checks they match.
Status validate(const EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);
Result<EvalReport> report_from_json(const nlohmann::json& j);
std::string report_to_string(const EvalReport& report);
// Fixed-width summary table for terminals.
std::string report_to_text(const EvalReport& report);

struct EvalSetup {
    EngineConfig engine;
    PromptCatalog prompts = PromptCatalog::defaults();
    std::shared_ptr<ModelBackend> backend;
    std::shared_ptr<Retriever> retriever;  // required for Rag and for RaIsf unless NoPRM
    MatchMode match_mode = MatchMode::Containment;
    int parallelism = 1;
    std::string dataset_name = "dataset";
};

// Runs every dataset question under the strategy and scores with exact
// match. Per-question solve errors become incorrect rows with a note and
// count toward failed_questions; the report is still produced.
Result<EvalReport> run_eval(const EvalSetup& setup,
                            const std::vector<QARecord>& dataset,
                            Strategy strategy);

struct SweepPoint {
    int param = 0;
    EvalReport report;
};

Result<std::vector<SweepPoint>> sweep_dth(const EvalSetup& setup,
                                          const std::vector<QARecord>& dataset,
                                          const std::vector<int>& values);
Result<std::vector<SweepPoint>> sweep_k(const EvalSetup& setup,
                                        const std::vector<QARecord>& dataset,
                                        const std::vector<int>& values);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

} // namespace raisf
