#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "raisf/backends/backend.hpp"
#include "raisf/core/types.hpp"

namespace raisf {

// Deterministic stand-in for the model roles. Every response is a pure
// function of (behavior, prompt): the question and context are extracted
// from the rendered prompt and looked up against the maps below.
struct ScriptedBehavior {
    struct AnswerRule {
        std::string question;
        // Context the rule matches: either the exact rendered block, or a
        // set of needles that must all appear in it. An exact empty context
        // matches closed-book (direct) prompts.
        bool context_is_exact = true;
        std::string context_exact;
        std::vector<std::string> context_contains;
        std::string answer;
    };
    struct RelevanceRule {
        std::string question;
        bool passage_is_exact = true;
        std::string passage_exact;
        std::string passage_contains;
        RelevanceVerdict verdict = RelevanceVerdict::Irrelevant;
    };

    std::map<std::string, KnowledgeVerdict> know;
    KnowledgeVerdict default_know = KnowledgeVerdict::Unknow;
    std::vector<AnswerRule> answers;
    std::string default_answer = "unknown";
    std::vector<RelevanceRule> relevance;
    std::map<std::string, std::vector<std::string>> decompositions;
    std::string default_decomposition = "No sub-questions.";

    // Convenience builders used by tests and the oracle-world generator.
    void set_know(const std::string& question, KnowledgeVerdict v);
    void set_direct_answer(const std::string& question, const std::string& answer);
    void set_context_answer(const std::string& question,
                            std::vector<std::string> needles,
                            const std::string& answer);
    void set_relevance(const std::string& question, const std::string& passage,
                       RelevanceVerdict v);
    void set_relevance_contains(const std::string& question, const std::string& needle,
                                RelevanceVerdict v);
    void set_decomposition(const std::string& question, std::vector<std::string> subs);
};

nlohmann::json scripted_behavior_to_json(const ScriptedBehavior& b);
Result<ScriptedBehavior> scripted_behavior_from_json(const nlohmann::json& j);
Result<ScriptedBehavior> load_scripted_behavior(const std::string& path);
Status save_scripted_behavior(const ScriptedBehavior& b, const std::string& path);

class ScriptedBackend : public ModelBackend {
public:
    explicit ScriptedBackend(ScriptedBehavior behavior);

    Result<std::string> complete(ModelRole role,
                                 const std::string& prompt,
                                 const DecodingSettings& decoding) override;

    std::string name() const override { return "scripted"; }

    const ScriptedBehavior& behavior() const { return behavior_; }

private:
    std::string answer_for(const std::string& question, const std::string& context) const;
    RelevanceVerdict relevance_for(const std::string& question,
                                   const std::string& passage) const;

    ScriptedBehavior behavior_;
};

} // namespace raisf
