#include "raisf/engine/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "raisf/backends/parsers.hpp"

namespace raisf {

namespace {

void finalize_counters(SolveTrace& t, std::uint64_t local_retrievals) {
    std::uint64_t nodes = 1;
    std::uint64_t retrievals = local_retrievals;
    for (const SolveTrace& c : t.children) {
        nodes += c.node_count;
        retrievals += c.retrieval_calls;
    }
    t.node_count = nodes;
    t.retrieval_calls = retrievals;
}

} // namespace

Engine::Engine(EngineConfig cfg, PromptCatalog prompts,
               std::shared_ptr<ModelBackend> backend,
               std::shared_ptr<Retriever> retriever)
    : cfg_(std::move(cfg)), prompts_(std::move(prompts)),
      backend_(std::move(backend)), retriever_(std::move(retriever)) {}

Result<std::shared_ptr<Engine>> Engine::create(EngineConfig cfg,
                                               PromptCatalog prompts,
                                               std::shared_ptr<ModelBackend> backend,
                                               std::shared_ptr<Retriever> retriever) {
    Status valid = validate(cfg);
    if (!valid.ok()) return valid.error();
    if (!backend) {
        return make_error(Errc::InvalidParams, "engine requires a backend");
    }
    if (!retriever && !cfg.ablation.no_prm) {
        return make_error(Errc::InvalidParams,
                          "engine requires a retriever unless retrieval is ablated");
    }
    if (prompts.know_probe.empty() || prompts.answer_direct.empty() ||
        prompts.answer_with_passages.empty() || prompts.relevance_probe.empty() ||
        prompts.decompose.empty() || prompts.aggregate.empty()) {
        return make_error(Errc::InvalidConfig, "prompt catalog has empty templates");
    }
    return std::shared_ptr<Engine>(new Engine(std::move(cfg), std::move(prompts),
                                              std::move(backend), std::move(retriever)));
}

Result<Answer> Engine::call_answer(PromptSite site, const std::string& question,
                                   const std::optional<std::vector<Passage>>& passages,
                                   const std::optional<std::vector<SubQa>>& subqa,
                                   std::vector<std::string>& notes) const {
    Result<std::string> prompt = render_prompt(prompts_, site, question, passages,
                                               subqa, cfg_.retrieval_length_l);
    if (!prompt.ok()) return prompt.error();
    ModelRole role = site == PromptSite::Aggregate ? ModelRole::Aggregate
                                                   : ModelRole::Answer;
    Result<std::string> out = backend_->complete(role, prompt.value(), cfg_.decoding);
    if (!out.ok()) {
        if (out.error().code == Errc::BackendRefusal) {
            notes.push_back(std::string(to_string(site)) +
                            " refused by backend: treated as unknown");
            return Answer::unknown();
        }
        return out.error();
    }
    return Answer::from_model_text(out.value());
}

Result<std::set<std::size_t>> Engine::judge_relevance(
    const Question& q, const std::vector<Passage>& passages,
    std::vector<std::string>& notes) const {
    std::set<std::size_t> relevant;
    if (cfg_.relevance_mode == RelevanceMode::Batch) {
        Result<std::string> prompt = render_prompt(prompts_, PromptSite::RelevanceProbe,
                                                   q.text, passages, std::nullopt,
                                                   cfg_.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();
        Result<std::string> out =
            backend_->complete(ModelRole::Relevance, prompt.value(), cfg_.decoding);
        if (!out.ok()) {
            if (out.error().code == Errc::BackendRefusal) {
                notes.push_back("relevance probe refused: all passages treated as irrelevant");
                return relevant;
            }
            return out.error();
        }
        Result<std::set<std::size_t>> parsed =
            parse_relevance_batch(out.value(), passages.size());
        if (!parsed.ok()) {
            notes.push_back("relevance response unparsable: all passages treated as irrelevant");
            return relevant;
        }
        return parsed.value();
    }

    for (std::size_t i = 0; i < passages.size(); ++i) {
        std::vector<Passage> single{passages[i]};
        Result<std::string> prompt = render_prompt(prompts_, PromptSite::RelevanceProbe,
                                                   q.text, single, std::nullopt,
                                                   cfg_.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();
        Result<std::string> out =
            backend_->complete(ModelRole::Relevance, prompt.value(), cfg_.decoding);
        if (!out.ok()) {
            if (out.error().code == Errc::BackendRefusal) {
                notes.push_back("relevance probe refused for passage " +
                                std::to_string(i + 1) + ": treated as irrelevant");
                continue;
            }
            return out.error();
        }
        Result<RelevanceVerdict> verdict = parse_relevance_single(out.value());
        if (!verdict.ok()) {
            notes.push_back("relevance verdict unparsable for passage " +
                            std::to_string(i + 1) + ": treated as irrelevant");
            continue;
        }
        if (verdict.value() == RelevanceVerdict::Relevant) {
            relevant.insert(i);
        }
    }
    return relevant;
}

Result<SolveTrace> Engine::solve_node(const Question& q) const {
    SolveTrace t;
    t.question = q;
    t.branch = Branch::DepthExceeded;
    t.answer = Answer::unknown();

    if (q.depth > cfg_.d_th) {
        t.notes.push_back("depth threshold exceeded");
        finalize_counters(t, 0);
        return t;
    }

    std::uint64_t local_retrievals = 0;

    if (!cfg_.ablation.no_skm) {
        Result<std::string> prompt = render_prompt(prompts_, PromptSite::KnowProbe,
                                                   q.text, std::nullopt, std::nullopt,
                                                   cfg_.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();
        Result<std::string> out =
            backend_->complete(ModelRole::Know, prompt.value(), cfg_.decoding);
        KnowledgeVerdict verdict = KnowledgeVerdict::Unknow;
        if (!out.ok()) {
            if (out.error().code != Errc::BackendRefusal) return out.error();
            t.notes.push_back("self-knowledge probe refused: treated as unknow");
        } else {
            Result<KnowledgeVerdict> parsed = parse_know_verdict(out.value());
            if (parsed.ok()) {
                verdict = parsed.value();
            } else {
                t.notes.push_back("self-knowledge verdict unparsable: treated as unknow");
            }
        }
        t.knowledge_verdict = verdict;
        if (verdict == KnowledgeVerdict::Know) {
            Result<Answer> answer = call_answer(PromptSite::AnswerDirect, q.text,
                                                std::nullopt, std::nullopt, t.notes);
            if (!answer.ok()) return answer.error();
            t.branch = Branch::SelfKnowledge;
            t.answer = answer.value();
            finalize_counters(t, 0);
            return t;
        }
    }

    if (!cfg_.ablation.no_prm) {
        local_retrievals = 1;
        Result<std::vector<Passage>> retrieved =
            retriever_->retrieve(q.text, cfg_.k_passages, cfg_.retrieval_length_l);
        if (!retrieved.ok()) {
            t.notes.push_back(std::string("retrieval failed: ") +
                              retrieved.error().message);
        } else {
            t.retrieved = std::move(retrieved).value();
            if (t.retrieved.empty()) {
                t.notes.push_back("retrieval returned no passages");
            }
        }
        if (!t.retrieved.empty()) {
            Result<std::set<std::size_t>> relevant =
                judge_relevance(q, t.retrieved, t.notes);
            if (!relevant.ok()) return relevant.error();
            t.relevant_indices = std::move(relevant).value();
            if (!t.relevant_indices.empty()) {
                std::vector<Passage> context;
                if (cfg_.answer_with_all_retrieved) {
                    context = t.retrieved;
                } else {
                    for (std::size_t idx : t.relevant_indices) {
                        context.push_back(t.retrieved[idx]);
                    }
                }
                Result<Answer> answer =
                    call_answer(PromptSite::AnswerWithPassages, q.text, context,
                                std::nullopt, t.notes);
                if (!answer.ok()) return answer.error();
                t.branch = Branch::RetrievalAnswer;
                t.answer = answer.value();
                finalize_counters(t, local_retrievals);
                return t;
            }
        }
    }

    if (!cfg_.ablation.no_qdm) {
        Result<std::string> prompt = render_prompt(prompts_, PromptSite::Decompose,
                                                   q.text, std::nullopt, std::nullopt,
                                                   cfg_.retrieval_length_l);
        if (!prompt.ok()) return prompt.error();
        Result<std::string> out =
            backend_->complete(ModelRole::Decompose, prompt.value(), cfg_.decoding);
        std::optional<Decomposition> decomposition;
        if (!out.ok()) {
            if (out.error().code != Errc::BackendRefusal) return out.error();
            t.notes.push_back("decomposition refused by backend");
        } else {
            Result<Decomposition> parsed = parse_decomposition(out.value());
            if (parsed.ok()) {
                decomposition = std::move(parsed).value();
            } else {
                t.notes.push_back("decomposition produced no sub-questions");
            }
        }
        if (decomposition) {
            std::size_t cap = static_cast<std::size_t>(cfg_.decomposition_fanout_cap);
            if (decomposition->sub_questions.size() > cap) {
                decomposition->sub_questions.resize(cap);
                t.notes.push_back("decomposition truncated to fanout cap");
            }
            t.branch = Branch::Decomposed;
            t.decomposition = decomposition;
            std::vector<SubQa> subqa;
            for (std::size_t i = 0; i < decomposition->sub_questions.size(); ++i) {
                Question child = child_question(q, i, decomposition->sub_questions[i]);
                Result<SolveTrace> sub = solve_node(child);
                if (!sub.ok()) return sub.error();
                subqa.push_back(SubQa{child.text, sub.value().answer.text});
                t.children.push_back(std::move(sub).value());
            }
            Result<Answer> answer = call_answer(PromptSite::Aggregate, q.text,
                                                std::nullopt, subqa, t.notes);
            if (!answer.ok()) return answer.error();
            t.answer = answer.value();
            finalize_counters(t, local_retrievals);
            return t;
        }
    }

    t.branch = Branch::DepthExceeded;
    t.answer = Answer::unknown();
    t.notes.push_back("terminal: no resolution path remained");
    finalize_counters(t, local_retrievals);
    return t;
}

Result<SolveResult> Engine::solve(const Question& root) const {
    if (trim_copy(root.text).empty()) {
        return make_error(Errc::EmptyQuestion, "question text is empty");
    }
    if (root.depth < 0) {
        return make_error(Errc::InvalidParams, "question depth is negative");
    }
    Result<SolveTrace> trace = solve_node(root);
    if (!trace.ok()) return trace.error();
    SolveResult result;
    result.answer = trace.value().answer;
    result.trace = std::move(trace).value();
    return result;
}

std::vector<Result<SolveResult>> Engine::solve_batch(
    const std::vector<Question>& questions, int parallelism) const {
    std::vector<std::optional<Result<SolveResult>>> slots(questions.size());
    int workers = parallelism < 1 ? 1 : parallelism;
    workers = std::min<int>(workers, 16);
    workers = std::min<int>(workers, static_cast<int>(questions.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < questions.size(); ++i) {
            slots[i] = solve(questions[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= questions.size()) break;
                slots[i] = solve(questions[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (std::thread& thread : pool) {
            thread.join();
        }
    }

    std::vector<Result<SolveResult>> out;
    out.reserve(questions.size());
    for (std::optional<Result<SolveResult>>& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

std::uint64_t max_retrievals_bound(int d_th, std::uint64_t fanout) {
    if (d_th < 0) return 0;
    constexpr std::uint64_t kMax = ~std::uint64_t{0};
    std::uint64_t total = 0;
    std::uint64_t power = 1;
    for (int i = 0; i <= d_th; ++i) {
        if (total > kMax - power) return kMax;
        total += power;
        if (i < d_th && fanout != 0) {
            if (power > kMax / fanout) return kMax;
            power *= fanout;
        } else if (i < d_th) {
            power = 0;
        }
    }
    return total;
}

} // namespace raisf
