#include <doctest.h>

#include "raisf/backends/prompts.hpp"

using namespace raisf;

TEST_CASE("default catalog carries all six templates with their inputs") {
    PromptCatalog c = PromptCatalog::defaults();
    CHECK(c.know_probe.find("Answer yes if you know") != std::string::npos);
    CHECK(c.know_probe.find("{question}") != std::string::npos);
    CHECK(c.answer_direct.find("Give the answer to the question.") != std::string::npos);
    CHECK(c.answer_with_passages.find("{passages}") != std::string::npos);
    CHECK(c.relevance_probe.find("five additional pieces of knowledge") !=
          std::string::npos);
    CHECK(c.relevance_probe.find("please answer \"No.\"") != std::string::npos);
    CHECK(c.decompose.find("several sub-questions and list them") != std::string::npos);
    CHECK(c.aggregate.find("{subqa}") != std::string::npos);
    CHECK(c.know_exemplars.size() == 2);
    CHECK(c.relevance_exemplars.size() == 2);
    CHECK(c.decompose_exemplars.size() == 2);
}

TEST_CASE("truncate_words keeps the first l words") {
    CHECK(truncate_words("one two three four", 2) == "one two");
    CHECK(truncate_words("  spaced   out\ttabs\nnewlines  ", 3) == "spaced out tabs");
    CHECK(truncate_words("short", 64) == "short");
    CHECK(truncate_words("", 5) == "");
    CHECK(truncate_words("a b c", 0) == "");
}

TEST_CASE("passage blocks number from one and truncate per passage") {
    std::vector<Passage> passages = {
        {"doc-a", 0, "alpha beta gamma delta", 2.0},
        {"doc-b", 3, "epsilon zeta", 1.0},
    };
    std::string block = render_passage_block(passages, 3);
    CHECK(block == "[1] alpha beta gamma\n\n[2] epsilon zeta");
    CHECK(render_passage_block({}, 3) == "");
}

TEST_CASE("numbered passages extract back out of a block") {
    std::vector<Passage> passages = {
        {"doc-a", 0, "alpha beta", 2.0},
        {"doc-b", 1, "gamma delta", 1.0},
    };
    std::string block = render_passage_block(passages, 64);
    std::vector<std::string> texts = extract_numbered_passages(block);
    REQUIRE(texts.size() == 2);
    CHECK(texts[0] == "alpha beta");
    CHECK(texts[1] == "gamma delta");

    std::string noisy = "preamble line\n[12] twelfth passage\nnot [a] passage\n[x] no";
    std::vector<std::string> from_noisy = extract_numbered_passages(noisy);
    REQUIRE(from_noisy.size() == 1);
    CHECK(from_noisy[0] == "twelfth passage");
}

TEST_CASE("subqa blocks pair questions with answers") {
    std::vector<SubQa> subqa = {{"first?", "alpha"}, {"second?", "unknown"}};
    CHECK(render_subqa_block(subqa) ==
          "1. Q: first?\n   Answer: alpha\n\n2. Q: second?\n   Answer: unknown");
}

TEST_CASE("render_prompt fills each site and enforces required inputs") {
    PromptCatalog c = PromptCatalog::defaults();
    std::vector<Passage> passages = {{"doc-a", 0, "fact text", 1.0}};
    std::vector<SubQa> subqa = {{"sub?", "answer"}};

    Result<std::string> know =
        render_prompt(c, PromptSite::KnowProbe, "  Is water wet?  ", std::nullopt,
                      std::nullopt, 64);
    REQUIRE(know.ok());
    CHECK(know.value().find("The problem is: Is water wet?") != std::string::npos);
    CHECK(know.value().find("{question}") == std::string::npos);

    Result<std::string> with_passages = render_prompt(
        c, PromptSite::AnswerWithPassages, "Is water wet?", passages, std::nullopt, 64);
    REQUIRE(with_passages.ok());
    CHECK(with_passages.value().find("[1] fact text") != std::string::npos);
    CHECK(with_passages.value().find("The question is: Is water wet?") !=
          std::string::npos);

    Result<std::string> aggregate = render_prompt(c, PromptSite::Aggregate,
                                                  "Is water wet?", std::nullopt, subqa, 64);
    REQUIRE(aggregate.ok());
    CHECK(aggregate.value().find("The original question is: Is water wet?") !=
          std::string::npos);
    CHECK(aggregate.value().find("1. Q: sub?") != std::string::npos);

    Result<std::string> missing_passages = render_prompt(
        c, PromptSite::AnswerWithPassages, "q?", std::nullopt, std::nullopt, 64);
    REQUIRE_FALSE(missing_passages.ok());
    CHECK(missing_passages.error().code == Errc::MissingTemplateInput);

    Result<std::string> missing_subqa =
        render_prompt(c, PromptSite::Aggregate, "q?", std::nullopt, std::nullopt, 64);
    REQUIRE_FALSE(missing_subqa.ok());

    Result<std::string> blank_question =
        render_prompt(c, PromptSite::AnswerDirect, "   ", std::nullopt, std::nullopt, 64);
    REQUIRE_FALSE(blank_question.ok());
    CHECK(blank_question.error().code == Errc::MissingTemplateInput);
}

TEST_CASE("unknown placeholders pass through untouched") {
    PromptCatalog c = PromptCatalog::defaults();
    c.answer_direct = "Custom {flavor} preamble.\n\nThe question is: {question}";
    Result<std::string> rendered =
        render_prompt(c, PromptSite::AnswerDirect, "q?", std::nullopt, std::nullopt, 64);
    REQUIRE(rendered.ok());
    CHECK(rendered.value().find("{flavor}") != std::string::npos);
}

TEST_CASE("question extraction picks the right marker per site") {
    PromptCatalog c = PromptCatalog::defaults();
    std::vector<Passage> passages = {{"doc-a", 0, "fact text", 1.0}};
    std::vector<SubQa> subqa = {{"sub one?", "alpha"}};

    struct Case {
        PromptSite site;
        std::optional<std::vector<Passage>> passages;
        std::optional<std::vector<SubQa>> subqa;
    };
    Case cases[] = {
        {PromptSite::KnowProbe, std::nullopt, std::nullopt},
        {PromptSite::AnswerDirect, std::nullopt, std::nullopt},
        {PromptSite::AnswerWithPassages, passages, std::nullopt},
        {PromptSite::RelevanceProbe, passages, std::nullopt},
        {PromptSite::Decompose, std::nullopt, std::nullopt},
        {PromptSite::Aggregate, std::nullopt, subqa},
    };
    for (const Case& tc : cases) {
        Result<std::string> rendered =
            render_prompt(c, tc.site, "Which year was it?", tc.passages, tc.subqa, 64);
        REQUIRE(rendered.ok());
        std::optional<std::string> q = extract_question_from_prompt(rendered.value());
        REQUIRE_MESSAGE(q.has_value(), to_string(tc.site));
        CHECK_MESSAGE(*q == "Which year was it?", to_string(tc.site));
    }
    CHECK_FALSE(extract_question_from_prompt("no markers here").has_value());
}

TEST_CASE("marker extraction stops at the end of the line") {
    std::string prompt = "The question is: first line?\nsecond line";
    std::optional<std::string> q = extract_after_marker(prompt, kQuestionMarker);
    REQUIRE(q.has_value());
    CHECK(*q == "first line?");
}
