#include "raisf/retrieval/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "raisf/backends/prompts.hpp"
#include "raisf/retrieval/score_kernel.hpp"
#include "raisf/retrieval/tokenizer.hpp"

namespace raisf {

double bm25_idf(std::size_t num_chunks, std::size_t doc_freq) {
    double n = static_cast<double>(num_chunks);
    double df = static_cast<double>(doc_freq);
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

Bm25Retriever::Bm25Retriever(PassageIndex index) : index_(std::move(index)) {}

Result<std::vector<Passage>> Bm25Retriever::retrieve(const std::string& query,
                                                     int k, int length_l) {
    if (k < 1) {
        return make_error(Errc::InvalidParams, "k must be >= 1");
    }
    if (length_l < 1) {
        return make_error(Errc::InvalidParams, "length_l must be >= 1");
    }
    std::vector<std::string> tokens = tokenize(query);
    if (tokens.empty()) {
        return make_error(Errc::EmptyQuery, "query has no indexable tokens");
    }
    // Each unique query term counts once; sorted order fixes the summation
    // order so scores are reproducible bit for bit.
    std::set<std::string> terms(tokens.begin(), tokens.end());

    std::vector<double> scores(index_.num_chunks(), 0.0);
    AccumulateFn kernel = active_kernel();
    for (const std::string& term : terms) {
        const PassageIndex::PostingList* pl = index_.postings(term);
        if (!pl) continue;
        double idf = bm25_idf(index_.num_chunks(), pl->chunk_ords.size());
        kernel(pl->chunk_ords.data(), pl->tfs.data(), pl->chunk_ords.size(),
               idf, index_.norms().data(), scores.data());
    }

    std::vector<std::uint32_t> candidates;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > 0.0) {
            candidates.push_back(static_cast<std::uint32_t>(i));
        }
    }
    auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        const PassageIndex::StoredChunk& ca = index_.chunk(a);
        const PassageIndex::StoredChunk& cb = index_.chunk(b);
        if (ca.doc_id != cb.doc_id) return ca.doc_id < cb.doc_id;
        return ca.chunk_index < cb.chunk_index;
    };
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k),
                                             candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take,
                      candidates.end(), better);
    candidates.resize(take);

    std::vector<Passage> out;
    out.reserve(take);
    for (std::uint32_t ord : candidates) {
        const PassageIndex::StoredChunk& c = index_.chunk(ord);
        Passage p;
        p.doc_id = c.doc_id;
        p.chunk_index = c.chunk_index;
        p.text = truncate_words(c.text, length_l);
        p.score = scores[ord];
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace raisf
