#include "raisf/retrieval/chunker.hpp"

#include <sstream>

namespace raisf {

Result<std::vector<Chunk>> chunk_document(const std::string& doc_id,
                                          const std::string& text) {
    if (doc_id.empty()) {
        return make_error(Errc::InvalidParams, "document id is empty");
    }
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string word;
    while (in >> word) {
        words.push_back(std::move(word));
    }
    if (words.empty()) {
        return make_error(Errc::EmptyDocument, "document '" + doc_id + "' has no words");
    }

    std::vector<Chunk> chunks;
    for (std::size_t start = 0; start < words.size(); start += kChunkWords) {
        std::size_t end = std::min(words.size(), start + kChunkWords);
        Chunk c;
        c.doc_id = doc_id;
        c.chunk_index = static_cast<int>(start / kChunkWords);
        for (std::size_t i = start; i < end; ++i) {
            if (i > start) c.text += ' ';
            c.text += words[i];
        }
        chunks.push_back(std::move(c));
    }
    return chunks;
}

} // namespace raisf
