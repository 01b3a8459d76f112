#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raisf/backends/backend.hpp"
#include "raisf/backends/prompts.hpp"
#include "raisf/core/result.hpp"
#include "raisf/retrieval/retriever.hpp"

namespace raisf {

struct QARecord {
    std::string id;
    std::string question;
    std::vector<std::string> gold_answers;
};

Status validate(const QARecord& record);

enum class CollectTask { Know, Rel, Decom };

const char* to_string(CollectTask task);

struct TrainingRecord {
    CollectTask task = CollectTask::Know;
    std::string input;
    std::string label;
};

struct CollectOutcome {
    std::vector<TrainingRecord> records;
    // One human-readable line per skipped item, in input order.
    std::vector<std::string> skips;
};

struct CollectOptions {
    PromptCatalog prompts = PromptCatalog::defaults();
    DecodingSettings decoding;
    int retrieval_length_l = 64;
    int parallelism = 1;
    bool strict_em = false;
};

// Labels each question "know"/"unknow" by asking the teacher closed-book and
// comparing its answer against gold with the evaluation match predicate.
Result<CollectOutcome> collect_know(const std::vector<QARecord>& dataset,
                                    ModelBackend& teacher,
                                    const CollectOptions& opts);

// Retrieves k passages per question and asks the teacher for a per-passage
// relevance verdict; one record per (question, passage).
Result<CollectOutcome> collect_rel(const std::vector<QARecord>& dataset,
                                   Retriever& retriever,
                                   ModelBackend& teacher,
                                   int k,
                                   const CollectOptions& opts);

// Asks the teacher to decompose each question; the label is the parsed list
// re-serialized as numbered lines.
Result<CollectOutcome> collect_decom(const std::vector<QARecord>& dataset,
                                     ModelBackend& teacher,
                                     const CollectOptions& opts);

// JSONL dataset: {"id", "question", "answers": [...]} per line.
Result<std::vector<QARecord>> load_qa_jsonl(const std::string& path);
Status save_qa_jsonl(const std::vector<QARecord>& records, const std::string& path);

// JSONL training output: {"task", "input", "label"} per line.
Status write_training_jsonl(const std::vector<TrainingRecord>& records,
                            const std::string& path);
Result<std::vector<TrainingRecord>> load_training_jsonl(const std::string& path);

// Uniform sample without replacement (Fisher-Yates on indices, own RNG so
// output is stable across standard libraries); keeps dataset order.
std::vector<QARecord> sample_records(const std::vector<QARecord>& records,
                                     std::size_t n, std::uint64_t seed);

} // namespace raisf
