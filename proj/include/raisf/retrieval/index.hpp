#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "raisf/core/result.hpp"
#include "raisf/retrieval/chunker.hpp"

namespace raisf {

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

struct CorpusDoc {
    std::string doc_id;
    std::string text;
};

// Inverted index over 100-word chunks. Chunk length is the indexed token
// count (not the word count), and feeds the BM25 length normalization.
class PassageIndex {
public:
    struct StoredChunk {
        std::string doc_id;
        int chunk_index = 0;
        std::string text;
        std::uint32_t length = 0;
    };

    struct PostingList {
        std::vector<std::uint32_t> chunk_ords; // ascending
        std::vector<double> tfs;               // parallel to chunk_ords
    };

    static Result<PassageIndex> build(const std::vector<CorpusDoc>& corpus);

    std::size_t num_chunks() const { return chunks_.size(); }
    const StoredChunk& chunk(std::size_t ord) const { return chunks_[ord]; }
    const std::vector<StoredChunk>& chunks() const { return chunks_; }
    double avgdl() const { return avgdl_; }
    // Per-chunk k1 * (1 - b + b * dl / avgdl), precomputed for scoring.
    const std::vector<double>& norms() const { return norms_; }
    const PostingList* postings(const std::string& term) const;
    std::size_t doc_freq(const std::string& term) const;
    std::uint64_t total_tokens() const { return total_tokens_; }
    std::size_t vocabulary_size() const { return postings_.size(); }

    nlohmann::json to_json() const;
    static Result<PassageIndex> from_json(const nlohmann::json& j);
    Status save(const std::string& path) const;
    static Result<PassageIndex> load(const std::string& path);

private:
    void finalize();

    std::vector<StoredChunk> chunks_;
    std::map<std::string, PostingList> postings_;
    std::vector<double> norms_;
    double avgdl_ = 0.0;
    std::uint64_t total_tokens_ = 0;
};

} // namespace raisf
