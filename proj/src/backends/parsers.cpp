#include "raisf/backends/parsers.hpp"

#include <cctype>

namespace raisf {

std::string first_word(const std::string& raw) {
    std::size_t i = 0;
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::string out;
    while (i < raw.size() && std::isalnum(static_cast<unsigned char>(raw[i]))) {
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
        ++i;
    }
    return out;
}

Result<KnowledgeVerdict> parse_know_verdict(const std::string& raw) {
    std::string word = first_word(raw);
    if (word == "yes") return KnowledgeVerdict::Know;
    if (word == "no") return KnowledgeVerdict::Unknow;
    return make_error(Errc::UnparsableVerdict,
                      "expected yes/no, got: " + trim_copy(raw).substr(0, 40));
}

Result<RelevanceVerdict> parse_relevance_single(const std::string& raw) {
    std::string word = first_word(raw);
    if (word == "relevant" || word == "yes") return RelevanceVerdict::Relevant;
    if (word == "irrelevant" || word == "no") return RelevanceVerdict::Irrelevant;
    return make_error(Errc::UnparsableVerdict,
                      "expected relevant/irrelevant, got: " + trim_copy(raw).substr(0, 40));
}

Result<std::set<std::size_t>> parse_relevance_batch(const std::string& raw,
                                                    std::size_t num_passages) {
    if (first_word(raw) == "no") {
        return std::set<std::size_t>{};
    }
    std::set<std::size_t> out;
    bool saw_bracket_number = false;
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] == '[') {
            std::size_t j = i + 1;
            std::size_t value = 0;
            bool digits = false;
            while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) {
                value = value * 10 + static_cast<std::size_t>(raw[j] - '0');
                digits = true;
                ++j;
            }
            if (digits && j < raw.size() && raw[j] == ']') {
                saw_bracket_number = true;
                if (value >= 1 && value <= num_passages) {
                    out.insert(value - 1);
                }
                i = j + 1;
                continue;
            }
        }
        ++i;
    }
    if (!saw_bracket_number) {
        return make_error(Errc::UnparsableRelevance,
                          "no passage references found: " + trim_copy(raw).substr(0, 40));
    }
    return out;
}

Result<Decomposition> parse_decomposition(const std::string& raw) {
    Decomposition d;
    std::vector<std::string> question_lines;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t line_end = raw.find('\n', pos);
        if (line_end == std::string::npos) line_end = raw.size();
        std::string line = trim_copy(raw.substr(pos, line_end - pos));
        if (!line.empty()) {
            std::size_t i = 0;
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
            if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
                std::string body = trim_copy(line.substr(i + 1));
                if (!body.empty()) {
                    d.sub_questions.push_back(body);
                }
            } else if (line.back() == '?') {
                question_lines.push_back(line);
            }
        }
        if (line_end == raw.size()) break;
        pos = line_end + 1;
    }
    if (d.sub_questions.empty()) {
        d.sub_questions = std::move(question_lines);
    }
    if (d.sub_questions.empty()) {
        return make_error(Errc::EmptyDecomposition,
                          "no sub-questions found: " + trim_copy(raw).substr(0, 40));
    }
    return d;
}

} // namespace raisf
