#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raisf/core/result.hpp"

namespace raisf {

struct Question {
    std::string id;
    std::string text;
    int depth = 0;
};

// Builds a root question (depth 0) with a deterministic id derived from the
// question text and a caller-chosen sequence number, so id assignment stays
// stable across runs. Fails on text that is empty after trimming.
Result<Question> new_root_question(const std::string& text, std::uint64_t seq = 0);

// Child of `parent` at depth parent.depth + 1; `index` is the zero-based
// position among its siblings and feeds the id.
Question child_question(const Question& parent, std::size_t index, const std::string& text);

enum class AnswerKind { Answered, Unknown };

struct Answer {
    AnswerKind kind = AnswerKind::Unknown;
    std::string text = "unknown";

    static Answer unknown();
    static Answer answered(std::string text);
    // Trims model output and folds any casing of "unknown" (with optional
    // trailing '.' or '!') into the Unknown answer.
    static Answer from_model_text(const std::string& raw);

    bool is_unknown() const { return kind == AnswerKind::Unknown; }
};

struct Passage {
    std::string doc_id;
    int chunk_index = 0;
    std::string text;
    double score = 0.0;
};

enum class KnowledgeVerdict { Know, Unknow };
enum class RelevanceVerdict { Relevant, Irrelevant };

struct Decomposition {
    std::vector<std::string> sub_questions;
};

const char* to_string(AnswerKind k);
const char* to_string(KnowledgeVerdict v);
const char* to_string(RelevanceVerdict v);

std::optional<AnswerKind> answer_kind_from_string(const std::string& s);
std::optional<KnowledgeVerdict> knowledge_verdict_from_string(const std::string& s);
std::optional<RelevanceVerdict> relevance_verdict_from_string(const std::string& s);

std::string trim_copy(const std::string& s);
std::string lower_ascii_copy(const std::string& s);

// FNV-1a 64-bit; used for question ids so hashes are stable across platforms.
std::uint64_t fnv1a64(const std::string& data);

} // namespace raisf
