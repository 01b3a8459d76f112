#pragma once

#include <memory>
#include <string>
#include <vector>

#include "raisf/core/result.hpp"
#include "raisf/core/types.hpp"
#include "raisf/retrieval/index.hpp"

namespace raisf {

// Retrieval abstraction; Bm25Retriever is the shipped implementation, and a
// dense (embedding) retriever can slot in behind the same interface.
class Retriever {
public:
    virtual ~Retriever() = default;

    // Top-k passages for the query, best first. Passage text is truncated to
    // the first `length_l` words. Chunks with zero score are never returned;
    // ties break ascending on (doc_id, chunk_index). Thread-safe for
    // concurrent calls.
    virtual Result<std::vector<Passage>> retrieve(const std::string& query,
                                                  int k, int length_l) = 0;
};

class Bm25Retriever : public Retriever {
public:
    explicit Bm25Retriever(PassageIndex index);

    Result<std::vector<Passage>> retrieve(const std::string& query,
                                          int k, int length_l) override;

    const PassageIndex& index() const { return index_; }

private:
    PassageIndex index_;
};

// Okapi BM25 inverse document frequency: ln((N - df + 0.5)/(df + 0.5) + 1).
double bm25_idf(std::size_t num_chunks, std::size_t doc_freq);

} // namespace raisf
