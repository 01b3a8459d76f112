#include "raisf/datacollect/collect.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <random>
#include <thread>

#include <json.hpp>

#include "raisf/backends/parsers.hpp"
#include "raisf/eval/exact_match.hpp"

namespace raisf {

using nlohmann::json;

const char* to_string(CollectTask task) {
    switch (task) {
    case CollectTask::Know: return "know";
    case CollectTask::Rel: return "rel";
    case CollectTask::Decom: return "decom";
    }
    return "know";
}

Status validate(const QARecord& record) {
    if (record.id.empty()) {
        return make_error(Errc::InvalidParams, "record id is empty");
    }
    if (trim_copy(record.question).empty()) {
        return make_error(Errc::EmptyQuestion, "record '" + record.id + "' has empty question");
    }
    if (record.gold_answers.empty()) {
        return make_error(Errc::InvalidParams, "record '" + record.id + "' has no gold answers");
    }
    for (const std::string& g : record.gold_answers) {
        if (g.empty()) {
            return make_error(Errc::InvalidParams,
                              "record '" + record.id + "' has an empty gold answer");
        }
    }
    return ok_status();
}

namespace {

std::string exemplar_block(const std::vector<std::string>& exemplars) {
    std::string out;
    for (const std::string& e : exemplars) {
        out += e;
        out += "\n\n";
    }
    return out;
}

struct PerRecordOutput {
    std::vector<TrainingRecord> records;
    std::vector<std::string> skips;
};

// Runs fn over record indices with a bounded pool; outputs are re-assembled
// in input order regardless of scheduling.
template <typename Fn>
CollectOutcome run_ordered(std::size_t count, int parallelism, Fn&& fn) {
    std::vector<PerRecordOutput> slots(count);
    int workers = std::max(1, std::min({parallelism, static_cast<int>(count), 16}));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            slots[i] = fn(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                slots[i] = fn(i);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    CollectOutcome out;
    for (PerRecordOutput& slot : slots) {
        for (TrainingRecord& r : slot.records) out.records.push_back(std::move(r));
        for (std::string& s : slot.skips) out.skips.push_back(std::move(s));
    }
    return out;
}

Status check_dataset(const std::vector<QARecord>& dataset) {
    if (dataset.empty()) {
        return make_error(Errc::InvalidParams, "dataset is empty");
    }
    for (const QARecord& r : dataset) {
        Status s = validate(r);
        if (!s.ok()) return s;
    }
    return ok_status();
}

} // namespace

Result<CollectOutcome> collect_know(const std::vector<QARecord>& dataset,
                                    ModelBackend& teacher,
                                    const CollectOptions& opts) {
    Status ok = check_dataset(dataset);
    if (!ok.ok()) return ok.error();

    std::string exemplars = exemplar_block(opts.prompts.know_exemplars);
    MatchMode mode = opts.strict_em ? MatchMode::Strict : MatchMode::Containment;

    CollectOutcome out = run_ordered(dataset.size(), opts.parallelism, [&](std::size_t i) {
        PerRecordOutput slot;
        const QARecord& r = dataset[i];
        Result<std::string> prompt =
            render_prompt(opts.prompts, PromptSite::AnswerDirect, r.question,
                          std::nullopt, std::nullopt, opts.retrieval_length_l);
        if (!prompt.ok()) {
            slot.skips.push_back("id=" + r.id + " task=know reason=" + prompt.error().message);
            return slot;
        }
        Result<std::string> answer =
            teacher.complete(ModelRole::Answer, exemplars + prompt.value(), opts.decoding);
        if (!answer.ok()) {
            slot.skips.push_back("id=" + r.id + " task=know reason=" +
                                 std::string(errc_name(answer.error().code)) + ": " +
                                 answer.error().message);
            return slot;
        }
        TrainingRecord record;
        record.task = CollectTask::Know;
        record.input = trim_copy(r.question);
        record.label = exact_match(answer.value(), r.gold_answers, mode) ? "know" : "unknow";
        slot.records.push_back(std::move(record));
        return slot;
    });
    return out;
}

Result<CollectOutcome> collect_rel(const std::vector<QARecord>& dataset,
                                   Retriever& retriever,
                                   ModelBackend& teacher,
                                   int k,
                                   const CollectOptions& opts) {
    if (k < 1) {
        return make_error(Errc::InvalidParams, "k must be >= 1");
    }
    Status ok = check_dataset(dataset);
    if (!ok.ok()) return ok.error();

    std::string exemplars = exemplar_block(opts.prompts.relevance_exemplars);

    CollectOutcome out = run_ordered(dataset.size(), opts.parallelism, [&](std::size_t i) {
        PerRecordOutput slot;
        const QARecord& r = dataset[i];
        Result<std::vector<Passage>> retrieved =
            retriever.retrieve(r.question, k, opts.retrieval_length_l);
        if (!retrieved.ok()) {
            slot.skips.push_back("id=" + r.id + " task=rel reason=retrieval failed: " +
                                 retrieved.error().message);
            return slot;
        }
        if (retrieved.value().empty()) {
            slot.skips.push_back("id=" + r.id + " task=rel reason=no passages retrieved");
            return slot;
        }
        for (std::size_t p = 0; p < retrieved.value().size(); ++p) {
            std::vector<Passage> single{retrieved.value()[p]};
            Result<std::string> prompt =
                render_prompt(opts.prompts, PromptSite::RelevanceProbe, r.question,
                              single, std::nullopt, opts.retrieval_length_l);
            if (!prompt.ok()) {
                slot.skips.push_back("id=" + r.id + " task=rel passage=" +
                                     std::to_string(p + 1) + " reason=" +
                                     prompt.error().message);
                continue;
            }
            Result<std::string> verdict_text = teacher.complete(
                ModelRole::Relevance, exemplars + prompt.value(), opts.decoding);
            if (!verdict_text.ok()) {
                slot.skips.push_back("id=" + r.id + " task=rel passage=" +
                                     std::to_string(p + 1) + " reason=" +
                                     std::string(errc_name(verdict_text.error().code)) +
                                     ": " + verdict_text.error().message);
                continue;
            }
            Result<RelevanceVerdict> verdict = parse_relevance_single(verdict_text.value());
            if (!verdict.ok()) {
                slot.skips.push_back("id=" + r.id + " task=rel passage=" +
                                     std::to_string(p + 1) +
                                     " reason=unparsable verdict: " +
                                     verdict.error().message);
                continue;
            }
            TrainingRecord record;
            record.task = CollectTask::Rel;
            record.input = prompt.value();
            record.label = to_string(verdict.value());
            slot.records.push_back(std::move(record));
        }
        return slot;
    });
    return out;
}

Result<CollectOutcome> collect_decom(const std::vector<QARecord>& dataset,
                                     ModelBackend& teacher,
                                     const CollectOptions& opts) {
    Status ok = check_dataset(dataset);
    if (!ok.ok()) return ok.error();

    std::string exemplars = exemplar_block(opts.prompts.decompose_exemplars);

    CollectOutcome out = run_ordered(dataset.size(), opts.parallelism, [&](std::size_t i) {
        PerRecordOutput slot;
        const QARecord& r = dataset[i];
        Result<std::string> prompt =
            render_prompt(opts.prompts, PromptSite::Decompose, r.question,
                          std::nullopt, std::nullopt, opts.retrieval_length_l);
        if (!prompt.ok()) {
            slot.skips.push_back("id=" + r.id + " task=decom reason=" + prompt.error().message);
            return slot;
        }
        Result<std::string> response =
            teacher.complete(ModelRole::Decompose, exemplars + prompt.value(), opts.decoding);
        if (!response.ok()) {
            slot.skips.push_back("id=" + r.id + " task=decom reason=" +
                                 std::string(errc_name(response.error().code)) + ": " +
                                 response.error().message);
            return slot;
        }
        Result<Decomposition> parsed = parse_decomposition(response.value());
        if (!parsed.ok()) {
            slot.skips.push_back("id=" + r.id + " task=decom reason=" +
                                 parsed.error().message);
            return slot;
        }
        std::string label;
        for (std::size_t s = 0; s < parsed.value().sub_questions.size(); ++s) {
            if (s > 0) label += "\n";
            label += std::to_string(s + 1) + ". " + parsed.value().sub_questions[s];
        }
        TrainingRecord record;
        record.task = CollectTask::Decom;
        record.input = trim_copy(r.question);
        record.label = std::move(label);
        slot.records.push_back(std::move(record));
        return slot;
    });
    return out;
}

Result<std::vector<QARecord>> load_qa_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open dataset: " + path);
    }
    std::vector<QARecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) + ": invalid JSON");
        }
        if (!j.contains("id") || !j["id"].is_string() ||
            !j.contains("question") || !j["question"].is_string() ||
            !j.contains("answers") || !j["answers"].is_array()) {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) +
                                  ": expected {id, question, answers}");
        }
        QARecord r;
        r.id = j["id"].get<std::string>();
        r.question = j["question"].get<std::string>();
        for (const json& a : j["answers"]) {
            if (!a.is_string()) {
                return make_error(Errc::InvalidParams,
                                  path + ":" + std::to_string(line_no) +
                                      ": answers must be strings");
            }
            r.gold_answers.push_back(a.get<std::string>());
        }
        Status valid = validate(r);
        if (!valid.ok()) {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) + ": " +
                                  valid.error().message);
        }
        out.push_back(std::move(r));
    }
    if (out.empty()) {
        return make_error(Errc::InvalidParams, "dataset is empty: " + path);
    }
    return out;
}

Status save_qa_jsonl(const std::vector<QARecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        return make_error(Errc::IoError, "cannot write dataset: " + path);
    }
    for (const QARecord& r : records) {
        json j;
        j["id"] = r.id;
        j["question"] = r.question;
        j["answers"] = r.gold_answers;
        out << j.dump() << "\n";
    }
    if (!out) {
        return make_error(Errc::IoError, "write failed: " + path);
    }
    return ok_status();
}

Status write_training_jsonl(const std::vector<TrainingRecord>& records,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        return make_error(Errc::IoError, "cannot write training file: " + path);
    }
    for (const TrainingRecord& r : records) {
        json j;
        j["task"] = to_string(r.task);
        j["input"] = r.input;
        j["label"] = r.label;
        out << j.dump() << "\n";
    }
    if (!out) {
        return make_error(Errc::IoError, "write failed: " + path);
    }
    return ok_status();
}

Result<std::vector<TrainingRecord>> load_training_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open training file: " + path);
    }
    std::vector<TrainingRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() ||
            !j.contains("task") || !j["task"].is_string() ||
            !j.contains("input") || !j["input"].is_string() ||
            !j.contains("label") || !j["label"].is_string()) {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) +
                                  ": expected {task, input, label}");
        }
        TrainingRecord r;
        std::string task = j["task"].get<std::string>();
        if (task == "know") {
            r.task = CollectTask::Know;
        } else if (task == "rel") {
            r.task = CollectTask::Rel;
        } else if (task == "decom") {
            r.task = CollectTask::Decom;
        } else {
            return make_error(Errc::InvalidParams,
                              path + ":" + std::to_string(line_no) + ": unknown task");
        }
        r.input = j["input"].get<std::string>();
        r.label = j["label"].get<std::string>();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<QARecord> sample_records(const std::vector<QARecord>& records,
                                     std::size_t n, std::uint64_t seed) {
    if (n >= records.size()) {
        return records;
    }
    std::vector<std::size_t> indices(records.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = indices.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());
    std::vector<QARecord> out;
    out.reserve(n);
    for (std::size_t i : indices) {
        out.push_back(records[i]);
    }
    return out;
}

} // namespace raisf
