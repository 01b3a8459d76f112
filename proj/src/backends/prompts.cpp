#include "raisf/backends/prompts.hpp"

#include <cctype>
#include <sstream>

namespace raisf {

const char* const kProblemMarker = "The problem is: ";
const char* const kQuestionMarker = "The question is: ";
const char* const kOriginalQuestionMarker = "The original question is: ";

PromptCatalog PromptCatalog::defaults() {
    PromptCatalog c;
    c.know_probe =
        "Can you use your own knowledge base to solve this problem? Answer yes "
        "if you know, no if you need additional knowledge base to solve it.\n\n"
        "The problem is: {question}";
    c.answer_direct =
        "Give the answer to the question.\n\n"
        "The question is: {question}";
    c.answer_with_passages =
        "Using the knowledge from the relevant paragraphs, give the answer to "
        "the question.\n\n"
        "{passages}\n\n"
        "The question is: {question}";
    c.relevance_probe =
        "I will provide you with five additional pieces of knowledge based on "
        "the search for this question. Please assess whether these five "
        "paragraphs are relevant to the question and sufficient to answer it. "
        "If they are, please tell me what the relevant paragraphs are; if not, "
        "please answer \"No.\"\n\n"
        "The question is: {question}\n\n"
        "{passages}";
    c.decompose =
        "Please break down this question into several sub-questions and list "
        "them\n\n"
        "The question is: {question}";
    c.aggregate =
        "Based on the sub-question answer, give the answer to the original "
        "question.\n\n"
        "The original question is: {question}\n\n"
        "{subqa}";
    c.know_exemplars = {
        "Question: What is the capital of France?\nJudgment: Yes.",
        "Question: What did my neighbor have for breakfast today?\nJudgment: No",
    };
    c.relevance_exemplars = {
        "Question: Who painted the Mona Lisa?\nParagraph: [1] Leonardo da Vinci "
        "painted the Mona Lisa in the early 16th century.\nJudgment: relevant",
        "Question: Who painted the Mona Lisa?\nParagraph: [1] The Louvre is the "
        "world's most-visited museum.\nJudgment: irrelevant",
    };
    c.decompose_exemplars = {
        "Question: Was the director of Jaws born before the moon landing?\n"
        "Sub-questions:\n1. Who directed Jaws?\n2. When was that director born?\n"
        "3. When did the moon landing happen?",
        "Question: Is the tallest mountain in Europe taller than the tallest in "
        "Africa?\nSub-questions:\n1. What is the tallest mountain in Europe and "
        "its height?\n2. What is the tallest mountain in Africa and its height?",
    };
    return c;
}

const char* to_string(PromptSite site) {
    switch (site) {
    case PromptSite::KnowProbe: return "know_probe";
    case PromptSite::AnswerDirect: return "answer_direct";
    case PromptSite::AnswerWithPassages: return "answer_with_passages";
    case PromptSite::RelevanceProbe: return "relevance_probe";
    case PromptSite::Decompose: return "decompose";
    case PromptSite::Aggregate: return "aggregate";
    }
    return "unknown";
}

std::string truncate_words(const std::string& text, int max_words) {
    std::istringstream in(text);
    std::string word;
    std::string out;
    int count = 0;
    while (count < max_words && in >> word) {
        if (count > 0) out += ' ';
        out += word;
        ++count;
    }
    return out;
}

std::string render_passage_block(const std::vector<Passage>& passages, int length_l) {
    std::string out;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += "[" + std::to_string(i + 1) + "] " +
               truncate_words(passages[i].text, length_l);
    }
    return out;
}

std::string render_subqa_block(const std::vector<SubQa>& subqa) {
    std::string out;
    for (std::size_t i = 0; i < subqa.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += std::to_string(i + 1) + ". Q: " + subqa[i].question +
               "\n   Answer: " + subqa[i].answer;
    }
    return out;
}

std::vector<std::string> extract_numbered_passages(const std::string& block) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < block.size()) {
        std::size_t line_end = block.find('\n', pos);
        if (line_end == std::string::npos) line_end = block.size();
        std::string line = block.substr(pos, line_end - pos);
        std::string trimmed = trim_copy(line);
        if (trimmed.size() > 2 && trimmed[0] == '[') {
            std::size_t close = trimmed.find(']');
            if (close != std::string::npos && close > 1) {
                bool digits = true;
                for (std::size_t i = 1; i < close; ++i) {
                    if (!std::isdigit(static_cast<unsigned char>(trimmed[i]))) {
                        digits = false;
                        break;
                    }
                }
                if (digits) {
                    out.push_back(trim_copy(trimmed.substr(close + 1)));
                }
            }
        }
        pos = line_end + 1;
    }
    return out;
}

namespace {

bool replace_all(std::string& text, const std::string& needle, const std::string& value) {
    bool found = false;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
        found = true;
    }
    return found;
}

const std::string& template_for(const PromptCatalog& c, PromptSite site) {
    switch (site) {
    case PromptSite::KnowProbe: return c.know_probe;
    case PromptSite::AnswerDirect: return c.answer_direct;
    case PromptSite::AnswerWithPassages: return c.answer_with_passages;
    case PromptSite::RelevanceProbe: return c.relevance_probe;
    case PromptSite::Decompose: return c.decompose;
    case PromptSite::Aggregate: return c.aggregate;
    }
    return c.answer_direct;
}

} // namespace

Result<std::string> render_prompt(const PromptCatalog& catalog,
                                  PromptSite site,
                                  const std::string& question,
                                  const std::optional<std::vector<Passage>>& passages,
                                  const std::optional<std::vector<SubQa>>& subqa,
                                  int length_l) {
    std::string text = template_for(catalog, site);

    bool needs_question = text.find("{question}") != std::string::npos;
    bool needs_passages = text.find("{passages}") != std::string::npos;
    bool needs_subqa = text.find("{subqa}") != std::string::npos;

    if (needs_question) {
        std::string trimmed = trim_copy(question);
        if (trimmed.empty()) {
            return make_error(Errc::MissingTemplateInput,
                              std::string(to_string(site)) + ": question is required");
        }
        replace_all(text, "{question}", trimmed);
    }
    if (needs_passages) {
        if (!passages) {
            return make_error(Errc::MissingTemplateInput,
                              std::string(to_string(site)) + ": passages are required");
        }
        replace_all(text, "{passages}", render_passage_block(*passages, length_l));
    }
    if (needs_subqa) {
        if (!subqa) {
            return make_error(Errc::MissingTemplateInput,
                              std::string(to_string(site)) + ": sub-answers are required");
        }
        replace_all(text, "{subqa}", render_subqa_block(*subqa));
    }
    return text;
}

std::optional<std::string> extract_after_marker(const std::string& prompt,
                                                const std::string& marker) {
    std::size_t pos = prompt.rfind(marker);
    if (pos == std::string::npos) return std::nullopt;
    std::size_t start = pos + marker.size();
    std::size_t end = prompt.find('\n', start);
    if (end == std::string::npos) end = prompt.size();
    return trim_copy(prompt.substr(start, end - start));
}

std::optional<std::string> extract_question_from_prompt(const std::string& prompt) {
    if (auto q = extract_after_marker(prompt, kOriginalQuestionMarker)) return q;
    if (auto q = extract_after_marker(prompt, kQuestionMarker)) return q;
    if (auto q = extract_after_marker(prompt, kProblemMarker)) return q;
    return std::nullopt;
}

} // namespace raisf
