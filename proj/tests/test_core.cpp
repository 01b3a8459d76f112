#include <doctest.h>

#include "raisf/core/config.hpp"
#include "raisf/core/trace.hpp"
#include "raisf/core/types.hpp"

using namespace raisf;

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("root question ids are deterministic content hashes") {
    Result<Question> a = new_root_question("  What is BM25?  ", 0);
    Result<Question> b = new_root_question("What is BM25?", 0);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.value().id == b.value().id);
    CHECK(a.value().text == "What is BM25?");
    CHECK(a.value().depth == 0);
    CHECK(a.value().id.substr(0, 3) == "q0-");
    CHECK(a.value().id.size() == 3 + 16);

    Result<Question> c = new_root_question("What is BM25?", 7);
    REQUIRE(c.ok());
    CHECK(c.value().id.substr(0, 3) == "q7-");
    CHECK(c.value().id.substr(3) == a.value().id.substr(3));

    CHECK_FALSE(new_root_question("   ", 0).ok());
    CHECK(new_root_question("", 0).error().code == Errc::EmptyQuestion);
}

TEST_CASE("child question ids chain through the parent") {
    Question root = new_root_question("root?", 0).value();
    Question kid = child_question(root, 2, "  sub question  ");
    CHECK(kid.depth == 1);
    CHECK(kid.text == "sub question");
    CHECK(kid.id.substr(0, root.id.size() + 3) == root.id + ".2-");
    Question grandkid = child_question(kid, 0, "deeper");
    CHECK(grandkid.depth == 2);
    CHECK(grandkid.id.rfind(kid.id + ".0-", 0) == 0);
}

TEST_CASE("model text folds unknown variants") {
    CHECK(Answer::from_model_text("Unknown.").kind == AnswerKind::Unknown);
    CHECK(Answer::from_model_text("  UNKNOWN!  ").kind == AnswerKind::Unknown);
    CHECK(Answer::from_model_text("unknown").text == "unknown");
    CHECK(Answer::from_model_text("").kind == AnswerKind::Unknown);
    Answer real = Answer::from_model_text("  Paris.  ");
    CHECK(real.kind == AnswerKind::Answered);
    CHECK(real.text == "Paris.");
    CHECK(Answer::from_model_text("unknown city").kind == AnswerKind::Answered);
}

TEST_CASE("enum strings round trip") {
    CHECK(knowledge_verdict_from_string(to_string(KnowledgeVerdict::Know)) ==
          KnowledgeVerdict::Know);
    CHECK(knowledge_verdict_from_string(to_string(KnowledgeVerdict::Unknow)) ==
          KnowledgeVerdict::Unknow);
    CHECK(relevance_verdict_from_string("relevant") == RelevanceVerdict::Relevant);
    CHECK(answer_kind_from_string("answered") == AnswerKind::Answered);
    CHECK_FALSE(knowledge_verdict_from_string("maybe").has_value());
    CHECK(branch_from_string("self_knowledge") == Branch::SelfKnowledge);
    CHECK(branch_from_string("retrieval_answer") == Branch::RetrievalAnswer);
    CHECK(branch_from_string("decomposed") == Branch::Decomposed);
    CHECK(branch_from_string("depth_exceeded") == Branch::DepthExceeded);
    CHECK_FALSE(branch_from_string("other").has_value());
}

namespace {

SolveTrace known_leaf(const Question& q, const std::string& text) {
    SolveTrace t;
    t.question = q;
    t.branch = Branch::SelfKnowledge;
    t.knowledge_verdict = KnowledgeVerdict::Know;
    t.answer = Answer::answered(text);
    t.retrieval_calls = 0;
    t.node_count = 1;
    return t;
}

SolveTrace retrieval_leaf(const Question& q, const std::string& text) {
    SolveTrace t;
    t.question = q;
    t.branch = Branch::RetrievalAnswer;
    t.knowledge_verdict = KnowledgeVerdict::Unknow;
    t.retrieved = {{"doc-a", 0, "some passage", 1.5}};
    t.relevant_indices = {0};
    t.answer = Answer::answered(text);
    t.retrieval_calls = 1;
    t.node_count = 1;
    return t;
}

} // namespace

TEST_CASE("trace validation accepts a hand-built decomposition tree") {
    Question root = new_root_question("composite?", 0).value();
    SolveTrace t;
    t.question = root;
    t.branch = Branch::Decomposed;
    t.knowledge_verdict = KnowledgeVerdict::Unknow;
    t.retrieved = {{"doc-a", 0, "irrelevant text", 0.4}};
    t.decomposition = Decomposition{{"first sub", "second sub"}};
    t.children.push_back(known_leaf(child_question(root, 0, "first sub"), "alpha"));
    t.children.push_back(
        retrieval_leaf(child_question(root, 1, "second sub"), "beta"));
    t.answer = Answer::answered("alpha beta");
    t.retrieval_calls = 2;  // own probe plus the second child
    t.node_count = 3;

    CHECK(validate_trace(t, 3).ok());

    SUBCASE("node_count must cover the subtree") {
        t.node_count = 2;
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("local retrieval delta must be 0 or 1") {
        t.retrieval_calls = 4;
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("children must match the decomposition text in order") {
        t.children[0].question.text = "renamed";
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("child depth must be parent depth plus one") {
        t.children[0].question.depth = 2;
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("unknown answers carry the canonical text") {
        t.children[0].answer.kind = AnswerKind::Unknown;
        t.children[0].answer.text = "no idea";
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
}

TEST_CASE("trace validation enforces branch exclusions") {
    Question root = new_root_question("q?", 0).value();

    SUBCASE("self-knowledge forbids retrieval") {
        SolveTrace t = known_leaf(root, "x");
        t.retrieval_calls = 1;
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("self-knowledge requires a know verdict") {
        SolveTrace t = known_leaf(root, "x");
        t.knowledge_verdict = KnowledgeVerdict::Unknow;
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("retrieval answers need a non-empty relevant set") {
        SolveTrace t = retrieval_leaf(root, "x");
        t.relevant_indices.clear();
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("relevant indices must point into retrieved") {
        SolveTrace t = retrieval_leaf(root, "x");
        t.relevant_indices = {3};
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("nodes past the depth gate answer unknown with no work") {
        Question deep = root;
        deep.depth = 4;
        SolveTrace t;
        t.question = deep;
        t.branch = Branch::DepthExceeded;
        t.answer = Answer::unknown();
        CHECK(validate_trace(t, 3).ok());
        t.retrieval_calls = 1;
        t.retrieved = {{"doc-a", 0, "text", 1.0}};
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
    SUBCASE("exhausted terminals inside the depth budget may have retrieved") {
        SolveTrace t;
        t.question = root;
        t.branch = Branch::DepthExceeded;
        t.knowledge_verdict = KnowledgeVerdict::Unknow;
        t.retrieved = {{"doc-a", 0, "text", 1.0}};
        t.retrieval_calls = 1;
        t.answer = Answer::unknown();
        CHECK(validate_trace(t, 3).ok());
        t.answer = Answer::answered("surprise");
        CHECK_FALSE(validate_trace(t, 3).ok());
    }
}

TEST_CASE("trace serialization round trips byte-for-byte") {
    Question root = new_root_question("round trip?", 0).value();
    SolveTrace t;
    t.question = root;
    t.branch = Branch::Decomposed;
    t.knowledge_verdict = KnowledgeVerdict::Unknow;
    t.retrieved = {{"doc-a", 0, "first passage", 2.25},
                   {"doc-b", 1, "second passage", 1.125}};
    t.decomposition = Decomposition{{"sub one"}};
    t.children.push_back(known_leaf(child_question(root, 0, "sub one"), "alpha"));
    t.answer = Answer::answered("alpha");
    t.retrieval_calls = 1;
    t.node_count = 2;
    t.notes = {"relevance probe refused: treated as irrelevant"};
    REQUIRE(validate_trace(t, 3).ok());

    std::string text = trace_to_string(t);
    Result<SolveTrace> back = trace_from_string(text);
    REQUIRE(back.ok());
    CHECK(trace_to_string(back.value()) == text);
    CHECK(back.value().children.size() == 1);
    CHECK(back.value().retrieved[1].score == doctest::Approx(1.125));
    CHECK(back.value().notes == t.notes);
}

TEST_CASE("trace parsing rejects malformed documents") {
    CHECK_FALSE(trace_from_string("not json").ok());
    CHECK_FALSE(trace_from_string("{}").ok());
    CHECK(trace_from_string("{}").error().code == Errc::InvalidTrace);
    CHECK_FALSE(trace_from_string(
                    R"({"format":"raisf-trace","version":2,"root":{}})")
                    .ok());

    // A structurally valid document whose counters lie must not parse.
    Question root = new_root_question("x?", 0).value();
    SolveTrace t = known_leaf(root, "y");
    nlohmann::json j = trace_to_json(t);
    j["root"]["node_count"] = 9;
    CHECK_FALSE(trace_from_json(j).ok());
}

TEST_CASE("ablation lists parse and reserialize") {
    Result<AblationSet> all = parse_ablation_list("no-skm,no-prm,no-qdm");
    REQUIRE(all.ok());
    CHECK(all.value().no_skm);
    CHECK(all.value().no_prm);
    CHECK(all.value().no_qdm);
    CHECK(ablation_to_string(all.value()) == "no-skm,no-prm,no-qdm");

    Result<AblationSet> one = parse_ablation_list(" no-prm ");
    REQUIRE(one.ok());
    CHECK_FALSE(one.value().no_skm);
    CHECK(one.value().no_prm);

    Result<AblationSet> none = parse_ablation_list("");
    REQUIRE(none.ok());
    CHECK_FALSE(none.value().any());

    CHECK_FALSE(parse_ablation_list("no-everything").ok());
    CHECK(parse_ablation_list("no-everything").error().code == Errc::InvalidConfig);
}

TEST_CASE("engine config defaults validate and round trip") {
    EngineConfig cfg;
    CHECK(cfg.d_th == 3);
    CHECK(cfg.k_passages == 5);
    CHECK(cfg.retrieval_length_l == 64);
    CHECK(cfg.decoding.temperature == 0.0);
    CHECK(cfg.decoding.max_output_tokens == 512);
    CHECK(validate(cfg).ok());

    cfg.d_th = 1;
    cfg.ablation.no_qdm = true;
    cfg.relevance_mode = RelevanceMode::PerPassage;
    cfg.answer_with_all_retrieved = true;
    cfg.seed = 42;
    nlohmann::json j = engine_config_to_json(cfg);
    Result<EngineConfig> back = engine_config_from_json(j);
    REQUIRE(back.ok());
    CHECK(engine_config_to_json(back.value()) == j);
    CHECK(back.value().relevance_mode == RelevanceMode::PerPassage);
    CHECK(back.value().ablation.no_qdm);
    CHECK(back.value().seed == 42);
}

TEST_CASE("engine config validation rejects out-of-range values") {
    EngineConfig cfg;
    cfg.d_th = -1;
    CHECK_FALSE(validate(cfg).ok());
    cfg.d_th = 17;
    CHECK_FALSE(validate(cfg).ok());
    cfg = EngineConfig{};
    cfg.k_passages = 0;
    CHECK_FALSE(validate(cfg).ok());
    cfg = EngineConfig{};
    cfg.retrieval_length_l = 0;
    CHECK_FALSE(validate(cfg).ok());
    cfg = EngineConfig{};
    cfg.decomposition_fanout_cap = 0;
    CHECK_FALSE(validate(cfg).ok());
    cfg = EngineConfig{};
    cfg.decoding.temperature = -0.5;
    CHECK_FALSE(validate(cfg).ok());
    cfg = EngineConfig{};
    cfg.decoding.max_output_tokens = 0;
    CHECK_FALSE(validate(cfg).ok());
}

TEST_CASE("engine config json accepts ablation as string or array") {
    nlohmann::json as_string = {{"ablation", "no-skm,no-qdm"}};
    Result<EngineConfig> a = engine_config_from_json(as_string);
    REQUIRE(a.ok());
    CHECK(a.value().ablation.no_skm);
    CHECK(a.value().ablation.no_qdm);
    CHECK_FALSE(a.value().ablation.no_prm);

    nlohmann::json as_array = {{"ablation", nlohmann::json::array({"no-prm"})}};
    Result<EngineConfig> b = engine_config_from_json(as_array);
    REQUIRE(b.ok());
    CHECK(b.value().ablation.no_prm);

    CHECK_FALSE(engine_config_from_json({{"ablation", 3}}).ok());
    CHECK_FALSE(engine_config_from_json({{"relevance_mode", "sideways"}}).ok());
    CHECK_FALSE(engine_config_from_json({{"d_th", "three"}}).ok());
    CHECK_FALSE(engine_config_from_json(nlohmann::json::array()).ok());
}
