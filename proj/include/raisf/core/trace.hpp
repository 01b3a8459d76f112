#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "raisf/core/result.hpp"
#include "raisf/core/types.hpp"

namespace raisf {

enum class Branch {
    SelfKnowledge,
    RetrievalAnswer,
    Decomposed,
    DepthExceeded,
};

const char* to_string(Branch b);
std::optional<Branch> branch_from_string(const std::string& s);

// One node of the solve tree. Aggregate counters (retrieval_calls,
// node_count) fold in the whole subtree rooted here.
struct SolveTrace {
    Question question;
    Branch branch = Branch::DepthExceeded;
    std::optional<KnowledgeVerdict> knowledge_verdict;
    std::vector<Passage> retrieved;
    std::set<std::size_t> relevant_indices;
    std::optional<Decomposition> decomposition;
    std::vector<SolveTrace> children;
    Answer answer;
    std::uint64_t retrieval_calls = 0;
    std::uint64_t node_count = 1;
    std::vector<std::string> notes;
};

// Structural invariants, checked against the depth threshold the solve ran
// with: branch exclusions, counter consistency, depth frontier, child order.
Status validate_trace(const SolveTrace& trace, int d_th);

nlohmann::json trace_to_json(const SolveTrace& trace);
Result<SolveTrace> trace_from_json(const nlohmann::json& j);

// Canonical serialized form (sorted keys, 2-space indent, trailing newline);
// equal traces serialize to identical bytes.
std::string trace_to_string(const SolveTrace& trace);
Result<SolveTrace> trace_from_string(const std::string& text);

} // namespace raisf
