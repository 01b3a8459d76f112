#pragma once

#include <string>
#include <vector>

#include "raisf/core/result.hpp"

namespace raisf {

inline constexpr int kChunkWords = 100;

struct Chunk {
    std::string doc_id;
    int chunk_index = 0;
    std::string text;
};

// Splits a document into consecutive non-overlapping chunks of kChunkWords
// whitespace-delimited words; the last chunk holds 1..kChunkWords words.
// Chunk text re-joins its words with single spaces, so concatenating all
// chunk words reproduces the document's word sequence exactly.
Result<std::vector<Chunk>> chunk_document(const std::string& doc_id,
                                          const std::string& text);

} // namespace raisf
