#include "raisf/eval/exact_match.hpp"

#include <cctype>
#include <sstream>

namespace raisf {

namespace {

std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

bool is_article(const std::string& w) {
    return w == "a" || w == "an" || w == "the";
}

} // namespace

std::string normalize_answer(const std::string& text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (uc < 0x80 && std::ispunct(uc)) {
            continue;
        }
        if (uc < 0x80) {
            lowered.push_back(static_cast<char>(std::tolower(uc)));
        } else {
            lowered.push_back(c);
        }
    }
    std::vector<std::string> words = split_words(lowered);
    std::string out;
    for (const std::string& w : words) {
        if (is_article(w)) continue;
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

namespace {

bool contains_word_seq(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle) {
    if (needle.empty()) return haystack.empty();
    if (needle.size() > haystack.size()) return false;
    for (std::size_t start = 0; start + needle.size() <= haystack.size(); ++start) {
        bool all = true;
        for (std::size_t i = 0; i < needle.size(); ++i) {
            if (haystack[start + i] != needle[i]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

} // namespace

bool exact_match(const std::string& prediction,
                 const std::vector<std::string>& gold_answers,
                 MatchMode mode) {
    std::string pred = normalize_answer(prediction);
    std::vector<std::string> pred_words = split_words(pred);
    for (const std::string& gold : gold_answers) {
        std::string g = normalize_answer(gold);
        if (mode == MatchMode::Strict) {
            if (pred == g) return true;
            continue;
        }
        if (g.empty()) {
            if (pred.empty()) return true;
            continue;
        }
        if (pred == g) return true;
        if (contains_word_seq(pred_words, split_words(g))) return true;
    }
    return false;
}

} // namespace raisf
