#include "raisf/eval/oracle.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

namespace raisf {

using nlohmann::json;

Status validate(const OracleParams& params) {
    if (params.num_composites < 1) {
        return make_error(Errc::InvalidParams, "num_composites must be >= 1");
    }
    if (params.max_facts_per_composite < 1) {
        return make_error(Errc::InvalidParams, "max_facts_per_composite must be >= 1");
    }
    if (params.p_know < 0.0 || params.p_know > 1.0) {
        return make_error(Errc::InvalidParams, "p_know must be in [0, 1]");
    }
    if (params.p_corpus < 0.0 || params.p_corpus > 1.0) {
        return make_error(Errc::InvalidParams, "p_corpus must be in [0, 1]");
    }
    if (params.max_distractors < 0) {
        return make_error(Errc::InvalidParams, "max_distractors must be >= 0");
    }
    return ok_status();
}

namespace {

const char* kNouns[] = {
    "codeword",  "passphrase", "cipher",    "token",    "label",     "marker",
    "designation", "callsign", "identifier", "keyphrase", "signature", "emblem",
    "motto",     "alias",      "handle",    "epithet",  "stamp",     "seal",
    "sigil",     "badge",      "insignia",  "watchword", "slogan",   "tagline",
};
constexpr std::size_t kNumNouns = sizeof(kNouns) / sizeof(kNouns[0]);

bool chance(std::mt19937_64& rng, double p) {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) < p;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::string padded(const char* prefix, std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, n);
    return buf;
}

} // namespace

Result<OracleWorld> generate_oracle_world(const OracleParams& params) {
    Status valid = validate(params);
    if (!valid.ok()) return valid.error();

    OracleWorld world;
    world.params = params;
    std::mt19937_64 rng(params.seed);

    for (int c = 0; c < params.num_composites; ++c) {
        int m = uniform_int(rng, 1, params.max_facts_per_composite);
        OracleComposite comp;
        comp.id = padded("comp-", static_cast<std::size_t>(c) + 1);
        comp.known = true;

        std::vector<std::string> record_tokens;
        std::vector<std::string> value_tokens;
        for (int f = 0; f < m; ++f) {
            std::size_t ordinal = world.facts.size();
            OracleFact fact;
            fact.record_token = padded("r", ordinal + 1);
            fact.value_token = padded("v", ordinal + 1);
            fact.noun = kNouns[ordinal % kNumNouns];
            fact.question = "Which " + fact.noun + " does archive record " +
                            fact.record_token + " hold?";
            fact.answer_sentence = "Archive record " + fact.record_token + " holds " +
                                   fact.noun + " " + fact.value_token + ".";
            fact.known = chance(rng, params.p_know);
            fact.in_corpus = chance(rng, params.p_corpus);
            fact.distractors = uniform_int(rng, 0, params.max_distractors);
            comp.known = comp.known && fact.known;
            comp.fact_ordinals.push_back(ordinal);
            record_tokens.push_back(fact.record_token);
            value_tokens.push_back(fact.value_token);
            world.facts.push_back(std::move(fact));
        }

        std::string token_list;
        for (std::size_t i = 0; i < record_tokens.size(); ++i) {
            if (i > 0) token_list += " and ";
            token_list += record_tokens[i];
        }
        comp.question = "What do archive records " + token_list + " hold when combined?";

        std::string combined_values;
        for (std::size_t i = 0; i < value_tokens.size(); ++i) {
            if (i > 0) combined_values += " ";
            combined_values += value_tokens[i];
        }

        QARecord record;
        record.id = comp.id;
        record.question = comp.question;
        record.gold_answers = {combined_values};
        world.dataset.push_back(std::move(record));

        ScriptedBehavior& b = world.behavior;
        b.set_know(comp.question, comp.known ? KnowledgeVerdict::Know
                                             : KnowledgeVerdict::Unknow);
        std::string combined_answer = "The combined sequence is " + combined_values + ".";
        // Closed-book answers exist only for known questions, so the direct
        // strategy scores exactly what the knowledge draws allow.
        if (comp.known) {
            b.set_direct_answer(comp.question, combined_answer);
        }
        b.set_context_answer(comp.question, value_tokens, combined_answer);

        std::vector<std::string> sub_questions;
        for (std::size_t ordinal : comp.fact_ordinals) {
            sub_questions.push_back(world.facts[ordinal].question);
        }
        b.set_decomposition(comp.question, std::move(sub_questions));

        world.composites.push_back(std::move(comp));
    }

    ScriptedBehavior& b = world.behavior;
    for (const OracleFact& fact : world.facts) {
        b.set_know(fact.question, fact.known ? KnowledgeVerdict::Know
                                             : KnowledgeVerdict::Unknow);
        if (fact.known) {
            b.set_direct_answer(fact.question, fact.answer_sentence);
        }
        b.set_context_answer(fact.question, {fact.value_token}, fact.answer_sentence);
        b.set_relevance(fact.question, fact.answer_sentence, RelevanceVerdict::Relevant);

        if (fact.in_corpus) {
            world.corpus.push_back({"fact-" + fact.record_token, fact.answer_sentence});
        }
        std::string distractor_text = "Archive record " + fact.record_token + " " +
                                      fact.noun + " audit: " + fact.record_token + " " +
                                      fact.noun + " review pending.";
        for (int d = 0; d < fact.distractors; ++d) {
            world.corpus.push_back({"fact-" + fact.record_token + "-dx" + std::to_string(d),
                                    distractor_text});
        }
    }

    if (world.corpus.empty()) {
        // Degenerate parameter corner (p_corpus = 0 and no distractors drawn);
        // keep the index buildable so retrieval still runs end to end.
        world.corpus.push_back({"filler-doc", "archive registry placeholder entry"});
    }
    return world;
}

Status write_oracle_world(const OracleWorld& world, const std::string& dir) {
    {
        std::ofstream out(dir + "/corpus.jsonl");
        if (!out) {
            return make_error(Errc::IoError, "cannot write " + dir + "/corpus.jsonl");
        }
        for (const CorpusDoc& doc : world.corpus) {
            json j;
            j["doc_id"] = doc.doc_id;
            j["text"] = doc.text;
            out << j.dump() << "\n";
        }
        if (!out) return make_error(Errc::IoError, "write failed: corpus.jsonl");
    }
    Status saved = save_qa_jsonl(world.dataset, dir + "/dataset.jsonl");
    if (!saved.ok()) return saved;
    saved = save_scripted_behavior(world.behavior, dir + "/behavior.json");
    if (!saved.ok()) return saved;
    {
        std::ofstream out(dir + "/params.json");
        if (!out) {
            return make_error(Errc::IoError, "cannot write " + dir + "/params.json");
        }
        json j;
        j["seed"] = world.params.seed;
        j["num_composites"] = world.params.num_composites;
        j["max_facts_per_composite"] = world.params.max_facts_per_composite;
        j["p_know"] = world.params.p_know;
        j["p_corpus"] = world.params.p_corpus;
        j["max_distractors"] = world.params.max_distractors;
        j["num_facts"] = world.facts.size();
        j["num_corpus_docs"] = world.corpus.size();
        out << j.dump(2) << "\n";
        if (!out) return make_error(Errc::IoError, "write failed: params.json");
    }
    return ok_status();
}

} // namespace raisf
