#include <doctest.h>

#include <cstdio>

#include "raisf/backends/prompts.hpp"
#include "raisf/backends/scripted_backend.hpp"

using namespace raisf;

namespace {

DecodingSettings decoding;

std::string rendered(PromptSite site, const std::string& question,
                     const std::optional<std::vector<Passage>>& passages = std::nullopt,
                     const std::optional<std::vector<SubQa>>& subqa = std::nullopt) {
    return render_prompt(PromptCatalog::defaults(), site, question, passages, subqa, 64)
        .value();
}

} // namespace

TEST_CASE("scripted know probe answers from the verdict map") {
    ScriptedBehavior b;
    b.set_know("Is water wet?", KnowledgeVerdict::Know);
    b.set_know("What is dark matter?", KnowledgeVerdict::Unknow);
    ScriptedBackend backend(b);

    CHECK(backend.complete(ModelRole::Know,
                           rendered(PromptSite::KnowProbe, "Is water wet?"), decoding)
              .value() == "Yes.");
    CHECK(backend.complete(ModelRole::Know,
                           rendered(PromptSite::KnowProbe, "What is dark matter?"),
                           decoding)
              .value() == "No");
    // Unmapped questions fall back to the default verdict.
    CHECK(backend.complete(ModelRole::Know,
                           rendered(PromptSite::KnowProbe, "Something else?"), decoding)
              .value() == "No");
}

TEST_CASE("scripted backend refuses prompts without a question marker") {
    ScriptedBackend backend{ScriptedBehavior{}};
    Result<std::string> r =
        backend.complete(ModelRole::Know, "free-form text with no markers", decoding);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == Errc::BackendRefusal);
    CHECK(backend.complete(ModelRole::Answer, "   ", decoding).error().code ==
          Errc::InvalidParams);
}

TEST_CASE("scripted answers distinguish closed-book and passage contexts") {
    ScriptedBehavior b;
    b.set_direct_answer("Who wrote it?", "The direct answer.");
    b.set_context_answer("Who wrote it?", {"v42"}, "The grounded answer.");
    ScriptedBackend backend(b);

    CHECK(backend.complete(ModelRole::Answer,
                           rendered(PromptSite::AnswerDirect, "Who wrote it?"), decoding)
              .value() == "The direct answer.");

    std::vector<Passage> hit = {{"doc", 0, "token v42 appears here", 1.0}};
    CHECK(backend.complete(
                     ModelRole::Answer,
                     rendered(PromptSite::AnswerWithPassages, "Who wrote it?", hit),
                     decoding)
              .value() == "The grounded answer.");

    std::vector<Passage> miss = {{"doc", 0, "nothing useful", 1.0}};
    CHECK(backend.complete(
                     ModelRole::Answer,
                     rendered(PromptSite::AnswerWithPassages, "Who wrote it?", miss),
                     decoding)
              .value() == "unknown");
}

TEST_CASE("contains rules prefer the most specific match") {
    ScriptedBehavior b;
    b.set_context_answer("q?", {"alpha"}, "one needle");
    b.set_context_answer("q?", {"alpha", "beta"}, "two needles");
    ScriptedBackend backend(b);

    std::vector<Passage> both = {{"doc", 0, "alpha beta together", 1.0}};
    CHECK(backend.complete(ModelRole::Answer,
                           rendered(PromptSite::AnswerWithPassages, "q?", both), decoding)
              .value() == "two needles");

    std::vector<Passage> one = {{"doc", 0, "alpha alone", 1.0}};
    CHECK(backend.complete(ModelRole::Answer,
                           rendered(PromptSite::AnswerWithPassages, "q?", one), decoding)
              .value() == "one needle");
}

TEST_CASE("scripted relevance replies in batch form") {
    ScriptedBehavior b;
    b.set_relevance("q?", "the good passage", RelevanceVerdict::Relevant);
    b.set_relevance_contains("q?", "promising", RelevanceVerdict::Relevant);
    ScriptedBackend backend(b);

    std::vector<Passage> passages = {
        {"doc-a", 0, "a distractor", 3.0},
        {"doc-b", 0, "the good passage", 2.0},
        {"doc-c", 0, "another promising lead", 1.0},
    };
    Result<std::string> reply = backend.complete(
        ModelRole::Relevance, rendered(PromptSite::RelevanceProbe, "q?", passages),
        decoding);
    REQUIRE(reply.ok());
    CHECK(reply.value() ==
          "Relevant paragraphs:\n[2] the good passage\n[3] another promising lead");

    std::vector<Passage> misses = {{"doc-a", 0, "a distractor", 3.0}};
    CHECK(backend.complete(ModelRole::Relevance,
                           rendered(PromptSite::RelevanceProbe, "q?", misses), decoding)
              .value() == "No.");

    // The batch reply must be consumable by both reply parsers' batch side.
    CHECK(backend.complete(ModelRole::Relevance,
                           rendered(PromptSite::RelevanceProbe, "other?", passages),
                           decoding)
              .value() == "No.");
}

TEST_CASE("scripted decomposition renders a numbered list or the default") {
    ScriptedBehavior b;
    b.set_decomposition("composite?", {"first sub?", "second sub?"});
    ScriptedBackend backend(b);

    CHECK(backend.complete(ModelRole::Decompose,
                           rendered(PromptSite::Decompose, "composite?"), decoding)
              .value() == "1. first sub?\n2. second sub?");
    CHECK(backend.complete(ModelRole::Decompose,
                           rendered(PromptSite::Decompose, "atomic?"), decoding)
              .value() == "No sub-questions.");
}

TEST_CASE("scripted aggregate matches needles against the sub-answer block") {
    ScriptedBehavior b;
    b.set_context_answer("composite?", {"v1", "v2"}, "combined v1 v2");
    ScriptedBackend backend(b);

    std::vector<SubQa> complete_subqa = {{"s1?", "value v1 found"}, {"s2?", "and v2"}};
    CHECK(backend.complete(ModelRole::Aggregate,
                           rendered(PromptSite::Aggregate, "composite?", std::nullopt,
                                    complete_subqa),
                           decoding)
              .value() == "combined v1 v2");

    std::vector<SubQa> partial = {{"s1?", "value v1 found"}, {"s2?", "unknown"}};
    CHECK(backend.complete(ModelRole::Aggregate,
                           rendered(PromptSite::Aggregate, "composite?", std::nullopt,
                                    partial),
                           decoding)
              .value() == "unknown");
}

TEST_CASE("scripted behavior survives a file round trip") {
    ScriptedBehavior b;
    b.set_know("k?", KnowledgeVerdict::Know);
    b.default_know = KnowledgeVerdict::Unknow;
    b.set_direct_answer("k?", "direct");
    b.set_context_answer("c?", {"n1", "n2"}, "grounded");
    b.set_relevance("c?", "exact passage", RelevanceVerdict::Relevant);
    b.set_relevance_contains("c?", "fuzzy", RelevanceVerdict::Irrelevant);
    b.set_decomposition("c?", {"s1?", "s2?"});
    b.default_answer = "dunno";
    b.default_decomposition = "cannot split";

    std::string path = "scripted_roundtrip_test.json";
    REQUIRE(save_scripted_behavior(b, path).ok());
    Result<ScriptedBehavior> back = load_scripted_behavior(path);
    std::remove(path.c_str());
    REQUIRE(back.ok());
    CHECK(scripted_behavior_to_json(back.value()) == scripted_behavior_to_json(b));
    CHECK(back.value().know.at("k?") == KnowledgeVerdict::Know);
    CHECK(back.value().answers.size() == 2);
    CHECK(back.value().relevance.size() == 2);
    CHECK(back.value().default_answer == "dunno");
}

TEST_CASE("scripted behavior parsing rejects malformed documents") {
    CHECK_FALSE(scripted_behavior_from_json(nlohmann::json::array()).ok());
    CHECK_FALSE(
        scripted_behavior_from_json({{"know", {{"q", "definitely"}}}}).ok());
    CHECK_FALSE(scripted_behavior_from_json(
                    {{"answers", nlohmann::json::array({{{"question", "q"}}})}})
                    .ok());
    nlohmann::json no_passage_key = {
        {"relevance",
         nlohmann::json::array({{{"question", "q"}, {"verdict", "relevant"}}})}};
    CHECK_FALSE(scripted_behavior_from_json(no_passage_key).ok());
    CHECK_FALSE(load_scripted_behavior("missing_file_xyz.json").ok());
}
