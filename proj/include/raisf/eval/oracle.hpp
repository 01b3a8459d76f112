#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raisf/backends/scripted_backend.hpp"
#include "raisf/core/result.hpp"
#include "raisf/datacollect/collect.hpp"
#include "raisf/retrieval/index.hpp"

namespace raisf {

// Synthetic closed-world generator for end-to-end simulation. Each composite
// question decomposes into fact lookups; every fact has a ground-truth value
// token, an optional corpus document stating it, and distractor documents
// that outrank the answer document, so retrieval depth (k) and recursion
// depth (d_th) have predictable effects on accuracy.
struct OracleParams {
    std::uint64_t seed = 1;
    int num_composites = 100;
    int max_facts_per_composite = 3;
    // Probability a fact is answerable without retrieval.
    double p_know = 0.3;
    // Probability the fact's answer document exists in the corpus.
    double p_corpus = 0.5;
    // Distractor documents per fact, drawn uniformly from 0..max. Each
    // distractor scores above the answer document for the fact's question,
    // pushing the answer to rank (distractors + 1).
    int max_distractors = 4;
};

Status validate(const OracleParams& params);

struct OracleFact {
    std::string record_token;  // unique lookup key, appears in all fact docs
    std::string noun;
    std::string value_token;   // ground-truth value
    std::string question;
    std::string answer_sentence;
    bool known = false;
    bool in_corpus = false;
    int distractors = 0;
};

struct OracleComposite {
    std::string id;
    std::string question;
    std::vector<std::size_t> fact_ordinals;
    bool known = false;  // true when every fact is known
};

struct OracleWorld {
    OracleParams params;
    std::vector<OracleFact> facts;
    std::vector<OracleComposite> composites;
    std::vector<CorpusDoc> corpus;
    std::vector<QARecord> dataset;  // one record per composite
    ScriptedBehavior behavior;
};

// Deterministic for a given parameter set: the draw sequence per composite is
// fact count, then (known, in_corpus, distractors) per fact, and this order
// is a stability contract for recorded expectations.
Result<OracleWorld> generate_oracle_world(const OracleParams& params);

// Writes corpus.jsonl, dataset.jsonl, behavior.json, and params.json into
// dir (which must already exist).
Status write_oracle_world(const OracleWorld& world, const std::string& dir);

} // namespace raisf
