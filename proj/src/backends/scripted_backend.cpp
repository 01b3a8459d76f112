#include "raisf/backends/scripted_backend.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "raisf/backends/prompts.hpp"

namespace raisf {

using nlohmann::json;

void ScriptedBehavior::set_know(const std::string& question, KnowledgeVerdict v) {
    know[trim_copy(question)] = v;
}

void ScriptedBehavior::set_direct_answer(const std::string& question,
                                         const std::string& answer) {
    AnswerRule r;
    r.question = trim_copy(question);
    r.context_is_exact = true;
    r.context_exact = "";
    r.answer = answer;
    answers.push_back(std::move(r));
}

void ScriptedBehavior::set_context_answer(const std::string& question,
                                          std::vector<std::string> needles,
                                          const std::string& answer) {
    AnswerRule r;
    r.question = trim_copy(question);
    r.context_is_exact = false;
    r.context_contains = std::move(needles);
    r.answer = answer;
    answers.push_back(std::move(r));
}

void ScriptedBehavior::set_relevance(const std::string& question,
                                     const std::string& passage, RelevanceVerdict v) {
    RelevanceRule r;
    r.question = trim_copy(question);
    r.passage_is_exact = true;
    r.passage_exact = passage;
    r.verdict = v;
    relevance.push_back(std::move(r));
}

void ScriptedBehavior::set_relevance_contains(const std::string& question,
                                              const std::string& needle,
                                              RelevanceVerdict v) {
    RelevanceRule r;
    r.question = trim_copy(question);
    r.passage_is_exact = false;
    r.passage_contains = needle;
    r.verdict = v;
    relevance.push_back(std::move(r));
}

void ScriptedBehavior::set_decomposition(const std::string& question,
                                         std::vector<std::string> subs) {
    decompositions[trim_copy(question)] = std::move(subs);
}

ScriptedBackend::ScriptedBackend(ScriptedBehavior behavior)
    : behavior_(std::move(behavior)) {}

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string joined_needles(const std::vector<std::string>& needles) {
    std::string out;
    for (const std::string& n : needles) {
        out += n;
        out += '\x1f';
    }
    return out;
}

// Canonical context of an answer-style prompt: the re-rendered passage block
// if the prompt carries one, the sub-answer block for aggregate prompts,
// empty for closed-book prompts.
std::string extract_context(ModelRole role, const std::string& prompt) {
    if (role == ModelRole::Aggregate) {
        std::size_t pos = prompt.rfind(kOriginalQuestionMarker);
        if (pos == std::string::npos) return "";
        std::size_t eol = prompt.find('\n', pos);
        if (eol == std::string::npos) return "";
        return trim_copy(prompt.substr(eol + 1));
    }
    std::vector<std::string> passages = extract_numbered_passages(prompt);
    std::string out;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += "[" + std::to_string(i + 1) + "] " + passages[i];
    }
    return out;
}

} // namespace

std::string ScriptedBackend::answer_for(const std::string& question,
                                        const std::string& context) const {
    for (const ScriptedBehavior::AnswerRule& r : behavior_.answers) {
        if (r.context_is_exact && r.question == question && r.context_exact == context) {
            return r.answer;
        }
    }
    const ScriptedBehavior::AnswerRule* best = nullptr;
    std::string best_key;
    for (const ScriptedBehavior::AnswerRule& r : behavior_.answers) {
        if (r.context_is_exact || r.question != question) continue;
        if (r.context_contains.empty()) continue;
        bool all = std::all_of(r.context_contains.begin(), r.context_contains.end(),
                               [&](const std::string& n) { return contains(context, n); });
        if (!all) continue;
        std::string key = joined_needles(r.context_contains);
        if (!best ||
            r.context_contains.size() > best->context_contains.size() ||
            (r.context_contains.size() == best->context_contains.size() && key < best_key)) {
            best = &r;
            best_key = key;
        }
    }
    if (best) return best->answer;
    return behavior_.default_answer;
}

RelevanceVerdict ScriptedBackend::relevance_for(const std::string& question,
                                                const std::string& passage) const {
    for (const ScriptedBehavior::RelevanceRule& r : behavior_.relevance) {
        if (r.passage_is_exact && r.question == question && r.passage_exact == passage) {
            return r.verdict;
        }
    }
    const ScriptedBehavior::RelevanceRule* best = nullptr;
    for (const ScriptedBehavior::RelevanceRule& r : behavior_.relevance) {
        if (r.passage_is_exact || r.question != question) continue;
        if (r.passage_contains.empty() || !contains(passage, r.passage_contains)) continue;
        if (!best ||
            r.passage_contains.size() > best->passage_contains.size() ||
            (r.passage_contains.size() == best->passage_contains.size() &&
             r.passage_contains < best->passage_contains)) {
            best = &r;
        }
    }
    if (best) return best->verdict;
    return RelevanceVerdict::Irrelevant;
}

Result<std::string> ScriptedBackend::complete(ModelRole role,
                                              const std::string& prompt,
                                              const DecodingSettings&) {
    if (trim_copy(prompt).empty()) {
        return make_error(Errc::InvalidParams, "empty prompt");
    }
    std::optional<std::string> question = extract_question_from_prompt(prompt);
    if (!question) {
        return make_error(Errc::BackendRefusal,
                          "scripted backend found no question marker in prompt");
    }

    switch (role) {
    case ModelRole::Know: {
        auto it = behavior_.know.find(*question);
        KnowledgeVerdict v = it != behavior_.know.end() ? it->second : behavior_.default_know;
        return std::string(v == KnowledgeVerdict::Know ? "Yes." : "No");
    }
    case ModelRole::Relevance: {
        std::vector<std::string> passages = extract_numbered_passages(prompt);
        if (passages.empty()) {
            return make_error(Errc::BackendRefusal,
                              "scripted backend found no passages in relevance prompt");
        }
        std::string relevant_lines;
        for (std::size_t i = 0; i < passages.size(); ++i) {
            if (relevance_for(*question, passages[i]) == RelevanceVerdict::Relevant) {
                relevant_lines += "\n[" + std::to_string(i + 1) + "] " + passages[i];
            }
        }
        if (relevant_lines.empty()) {
            return std::string("No.");
        }
        return "Relevant paragraphs:" + relevant_lines;
    }
    case ModelRole::Decompose: {
        auto it = behavior_.decompositions.find(*question);
        if (it == behavior_.decompositions.end()) {
            return behavior_.default_decomposition;
        }
        std::string out;
        for (std::size_t i = 0; i < it->second.size(); ++i) {
            if (i > 0) out += "\n";
            out += std::to_string(i + 1) + ". " + it->second[i];
        }
        return out;
    }
    case ModelRole::Answer:
    case ModelRole::Aggregate: {
        return answer_for(*question, extract_context(role, prompt));
    }
    }
    return make_error(Errc::BackendRefusal, "unsupported role");
}

json scripted_behavior_to_json(const ScriptedBehavior& b) {
    json j;
    json know = json::object();
    for (const auto& [q, v] : b.know) {
        know[q] = to_string(v);
    }
    j["know"] = know;
    j["default_know"] = to_string(b.default_know);

    json answers = json::array();
    for (const ScriptedBehavior::AnswerRule& r : b.answers) {
        json rule;
        rule["question"] = r.question;
        rule["answer"] = r.answer;
        if (r.context_is_exact) {
            rule["context"] = r.context_exact;
        } else {
            rule["context_contains"] = r.context_contains;
        }
        answers.push_back(rule);
    }
    j["answers"] = answers;
    j["default_answer"] = b.default_answer;

    json relevance = json::array();
    for (const ScriptedBehavior::RelevanceRule& r : b.relevance) {
        json rule;
        rule["question"] = r.question;
        rule["verdict"] = to_string(r.verdict);
        if (r.passage_is_exact) {
            rule["passage"] = r.passage_exact;
        } else {
            rule["passage_contains"] = r.passage_contains;
        }
        relevance.push_back(rule);
    }
    j["relevance"] = relevance;

    json decompositions = json::object();
    for (const auto& [q, subs] : b.decompositions) {
        decompositions[q] = subs;
    }
    j["decompositions"] = decompositions;
    j["default_decomposition"] = b.default_decomposition;
    return j;
}

namespace {

Error bad_behavior(const std::string& what) {
    return make_error(Errc::InvalidConfig, "scripted behavior: " + what);
}

} // namespace

Result<ScriptedBehavior> scripted_behavior_from_json(const json& j) {
    if (!j.is_object()) return bad_behavior("document is not an object");
    ScriptedBehavior b;

    if (j.contains("know")) {
        if (!j["know"].is_object()) return bad_behavior("know must be an object");
        for (const auto& [q, vj] : j["know"].items()) {
            if (!vj.is_string()) return bad_behavior("know verdict must be a string");
            auto v = knowledge_verdict_from_string(vj.get<std::string>());
            if (!v) return bad_behavior("unknown know verdict '" + vj.get<std::string>() + "'");
            b.know[q] = *v;
        }
    }
    if (j.contains("default_know")) {
        if (!j["default_know"].is_string()) return bad_behavior("default_know must be a string");
        auto v = knowledge_verdict_from_string(j["default_know"].get<std::string>());
        if (!v) return bad_behavior("unknown default_know value");
        b.default_know = *v;
    }
    if (j.contains("answers")) {
        if (!j["answers"].is_array()) return bad_behavior("answers must be an array");
        for (const json& rj : j["answers"]) {
            if (!rj.is_object() || !rj.contains("question") || !rj["question"].is_string() ||
                !rj.contains("answer") || !rj["answer"].is_string()) {
                return bad_behavior("malformed answer rule");
            }
            ScriptedBehavior::AnswerRule r;
            r.question = trim_copy(rj["question"].get<std::string>());
            r.answer = rj["answer"].get<std::string>();
            if (rj.contains("context_contains")) {
                if (!rj["context_contains"].is_array()) {
                    return bad_behavior("context_contains must be an array");
                }
                r.context_is_exact = false;
                for (const json& nj : rj["context_contains"]) {
                    if (!nj.is_string()) return bad_behavior("context needle must be a string");
                    r.context_contains.push_back(nj.get<std::string>());
                }
                if (r.context_contains.empty()) {
                    return bad_behavior("context_contains must not be empty");
                }
            } else {
                r.context_is_exact = true;
                if (rj.contains("context")) {
                    if (!rj["context"].is_string()) return bad_behavior("context must be a string");
                    r.context_exact = rj["context"].get<std::string>();
                }
            }
            b.answers.push_back(std::move(r));
        }
    }
    if (j.contains("default_answer")) {
        if (!j["default_answer"].is_string()) return bad_behavior("default_answer must be a string");
        b.default_answer = j["default_answer"].get<std::string>();
    }
    if (j.contains("relevance")) {
        if (!j["relevance"].is_array()) return bad_behavior("relevance must be an array");
        for (const json& rj : j["relevance"]) {
            if (!rj.is_object() || !rj.contains("question") || !rj["question"].is_string() ||
                !rj.contains("verdict") || !rj["verdict"].is_string()) {
                return bad_behavior("malformed relevance rule");
            }
            auto v = relevance_verdict_from_string(rj["verdict"].get<std::string>());
            if (!v) return bad_behavior("unknown relevance verdict");
            ScriptedBehavior::RelevanceRule r;
            r.question = trim_copy(rj["question"].get<std::string>());
            r.verdict = *v;
            if (rj.contains("passage_contains")) {
                if (!rj["passage_contains"].is_string()) {
                    return bad_behavior("passage_contains must be a string");
                }
                r.passage_is_exact = false;
                r.passage_contains = rj["passage_contains"].get<std::string>();
                if (r.passage_contains.empty()) {
                    return bad_behavior("passage_contains must not be empty");
                }
            } else if (rj.contains("passage")) {
                if (!rj["passage"].is_string()) return bad_behavior("passage must be a string");
                r.passage_is_exact = true;
                r.passage_exact = rj["passage"].get<std::string>();
            } else {
                return bad_behavior("relevance rule needs passage or passage_contains");
            }
            b.relevance.push_back(std::move(r));
        }
    }
    if (j.contains("decompositions")) {
        if (!j["decompositions"].is_object()) {
            return bad_behavior("decompositions must be an object");
        }
        for (const auto& [q, sj] : j["decompositions"].items()) {
            if (!sj.is_array()) return bad_behavior("decomposition must be an array");
            std::vector<std::string> subs;
            for (const json& item : sj) {
                if (!item.is_string()) return bad_behavior("sub-question must be a string");
                subs.push_back(item.get<std::string>());
            }
            b.decompositions[q] = std::move(subs);
        }
    }
    if (j.contains("default_decomposition")) {
        if (!j["default_decomposition"].is_string()) {
            return bad_behavior("default_decomposition must be a string");
        }
        b.default_decomposition = j["default_decomposition"].get<std::string>();
    }
    return b;
}

Result<ScriptedBehavior> load_scripted_behavior(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open behavior file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    json j = json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) {
        return make_error(Errc::InvalidConfig, "behavior file is not valid JSON: " + path);
    }
    return scripted_behavior_from_json(j);
}

Status save_scripted_behavior(const ScriptedBehavior& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        return make_error(Errc::IoError, "cannot write behavior file: " + path);
    }
    out << scripted_behavior_to_json(b).dump(2) << "\n";
    if (!out) {
        return make_error(Errc::IoError, "write failed: " + path);
    }
    return ok_status();
}

} // namespace raisf
