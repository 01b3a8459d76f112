#pragma once

#include <set>
#include <string>

#include "raisf/core/result.hpp"
#include "raisf/core/types.hpp"

namespace raisf {

// First word "yes" -> Know, "no" -> Unknow (case-insensitive, punctuation
// ignored). Anything else is UnparsableVerdict.
Result<KnowledgeVerdict> parse_know_verdict(const std::string& raw);

// Single-passage judgment: leading "relevant"/"yes" vs "irrelevant"/"no".
Result<RelevanceVerdict> parse_relevance_single(const std::string& raw);

// Batch judgment over `num_passages` passages. A leading "no" means nothing
// is relevant; otherwise every bracketed in-range index ("[2]") marks a
// relevant passage (returned zero-based). A response with neither form is
// UnparsableRelevance.
Result<std::set<std::size_t>> parse_relevance_batch(const std::string& raw,
                                                    std::size_t num_passages);

// Numbered lines ("1. ..." / "2) ...") in order; if none, falls back to
// non-empty lines ending in '?'. No usable lines is EmptyDecomposition.
Result<Decomposition> parse_decomposition(const std::string& raw);

// Lowercased run of leading alphanumeric characters, skipping whitespace.
std::string first_word(const std::string& raw);

} // namespace raisf
