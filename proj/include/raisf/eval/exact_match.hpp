#pragma once

#include <string>
#include <vector>

namespace raisf {

enum class MatchMode {
    // Normalized gold must appear as a contiguous word sequence in the
    // normalized prediction (equality counts).
    Containment,
    // Normalized strings must be equal.
    Strict,
};

// Lowercases ASCII letters, strips ASCII punctuation characters, removes the
// articles "a", "an", "the" as whole words, and collapses whitespace runs to
// single spaces. Bytes >= 0x80 pass through unchanged.
std::string normalize_answer(const std::string& text);

// True if the prediction matches any gold answer after normalization.
// An empty normalized gold matches only an empty normalized prediction.
bool exact_match(const std::string& prediction,
                 const std::vector<std::string>& gold_answers,
                 MatchMode mode = MatchMode::Containment);

} // namespace raisf
