#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raisf/core/result.hpp"
#include "raisf/core/types.hpp"

namespace raisf {

// One template per prompt site. Placeholders: {question}, {passages},
// {subqa}. A template referencing a placeholder makes that input mandatory
// at render time; unknown placeholders are left verbatim.
struct PromptCatalog {
    std::string know_probe;
    std::string answer_direct;
    std::string answer_with_passages;
    std::string relevance_probe;
    std::string decompose;
    std::string aggregate;

    // Few-shot exemplars, used only by the data-collection pipelines.
    std::vector<std::string> know_exemplars;
    std::vector<std::string> relevance_exemplars;
    std::vector<std::string> decompose_exemplars;

    static PromptCatalog defaults();
};

enum class PromptSite {
    KnowProbe,
    AnswerDirect,
    AnswerWithPassages,
    RelevanceProbe,
    Decompose,
    Aggregate,
};

const char* to_string(PromptSite site);

struct SubQa {
    std::string question;
    std::string answer;
};

// Truncates to the first `max_words` whitespace-delimited words; words are
// re-joined with single spaces.
std::string truncate_words(const std::string& text, int max_words);

// "[1] text\n\n[2] text ..." with each passage truncated to `length_l` words.
std::string render_passage_block(const std::vector<Passage>& passages, int length_l);

// "1. Q: ...\n   Answer: ...", blocks separated by blank lines.
std::string render_subqa_block(const std::vector<SubQa>& subqa);

// Recovers passage texts (in order) from a rendered passage block.
std::vector<std::string> extract_numbered_passages(const std::string& block);

Result<std::string> render_prompt(const PromptCatalog& catalog,
                                  PromptSite site,
                                  const std::string& question,
                                  const std::optional<std::vector<Passage>>& passages,
                                  const std::optional<std::vector<SubQa>>& subqa,
                                  int length_l);

// Marker lines the renderer emits in front of the question; the scripted
// backend and tests locate the question by the last marker occurrence.
extern const char* const kProblemMarker;  // know probe
extern const char* const kQuestionMarker; // answer / relevance / decompose
extern const char* const kOriginalQuestionMarker; // aggregate

// Extracts the text after the last marker occurrence, up to end of line.
std::optional<std::string> extract_after_marker(const std::string& prompt,
                                                const std::string& marker);
std::optional<std::string> extract_question_from_prompt(const std::string& prompt);

} // namespace raisf
