#pragma once

#include <memory>
#include <vector>

#include "raisf/backends/backend.hpp"
#include "raisf/backends/prompts.hpp"
#include "raisf/core/config.hpp"
#include "raisf/core/result.hpp"
#include "raisf/core/trace.hpp"
#include "raisf/core/types.hpp"
#include "raisf/retrieval/retriever.hpp"

namespace raisf {

struct SolveResult {
    Answer answer;
    SolveTrace trace;
};

// Iterative solve loop: depth gate, self-knowledge gate, retrieval with
// relevance filtering, recursive decomposition with aggregation. Probe-level
// failures (refusals, unparsable output) degrade to the conservative branch
// and leave a note in the trace; only BackendUnavailable aborts a solve.
class Engine {
public:
    // retriever may be null only when the config disables retrieval (NoPRM).
    static Result<std::shared_ptr<Engine>> create(EngineConfig cfg,
                                                  PromptCatalog prompts,
                                                  std::shared_ptr<ModelBackend> backend,
                                                  std::shared_ptr<Retriever> retriever);

    Result<SolveResult> solve(const Question& root) const;

    // Solves independent questions with a bounded worker pool; results keep
    // input order and failures stay per-slot. The backend and retriever must
    // tolerate concurrent calls.
    std::vector<Result<SolveResult>> solve_batch(const std::vector<Question>& questions,
                                                 int parallelism) const;

    const EngineConfig& config() const { return cfg_; }
    const PromptCatalog& prompt_catalog() const { return prompts_; }
    const std::shared_ptr<ModelBackend>& backend() const { return backend_; }
    const std::shared_ptr<Retriever>& retriever() const { return retriever_; }

private:
    Engine(EngineConfig cfg, PromptCatalog prompts,
           std::shared_ptr<ModelBackend> backend,
           std::shared_ptr<Retriever> retriever);

    Result<SolveTrace> solve_node(const Question& q) const;
    Result<Answer> call_answer(PromptSite site, const std::string& question,
                               const std::optional<std::vector<Passage>>& passages,
                               const std::optional<std::vector<SubQa>>& subqa,
                               std::vector<std::string>& notes) const;
    Result<std::set<std::size_t>> judge_relevance(const Question& q,
                                                  const std::vector<Passage>& passages,
                                                  std::vector<std::string>& notes) const;

    EngineConfig cfg_;
    PromptCatalog prompts_;
    std::shared_ptr<ModelBackend> backend_;
    std::shared_ptr<Retriever> retriever_;
};

// Worst-case retriever invocations for a solve: one per node on depths
// 0..d_th of a complete fanout-ary tree, sum fanout^i. fanout=1 gives
// d_th + 1; fanout=0 gives 1. Saturates at uint64 max.
std::uint64_t max_retrievals_bound(int d_th, std::uint64_t fanout);

} // namespace raisf
