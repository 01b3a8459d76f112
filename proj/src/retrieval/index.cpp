#include "raisf/retrieval/index.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "raisf/retrieval/tokenizer.hpp"

namespace raisf {

using nlohmann::json;

void PassageIndex::finalize() {
    total_tokens_ = 0;
    for (const StoredChunk& c : chunks_) {
        total_tokens_ += c.length;
    }
    avgdl_ = chunks_.empty() ? 0.0
                             : static_cast<double>(total_tokens_) /
                                   static_cast<double>(chunks_.size());
    norms_.resize(chunks_.size());
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        double ratio = avgdl_ > 0.0
                           ? static_cast<double>(chunks_[i].length) / avgdl_
                           : 0.0;
        norms_[i] = kBm25K1 * (1.0 - kBm25B + kBm25B * ratio);
    }
}

Result<PassageIndex> PassageIndex::build(const std::vector<CorpusDoc>& corpus) {
    if (corpus.empty()) {
        return make_error(Errc::EmptyCorpus, "corpus has no documents");
    }
    PassageIndex index;
    std::set<std::string> seen_ids;
    for (const CorpusDoc& doc : corpus) {
        if (!seen_ids.insert(doc.doc_id).second) {
            return make_error(Errc::InvalidParams,
                              "duplicate doc_id '" + doc.doc_id + "'");
        }
        Result<std::vector<Chunk>> chunks = chunk_document(doc.doc_id, doc.text);
        if (!chunks.ok()) return chunks.error();
        for (Chunk& c : chunks.value()) {
            std::vector<std::string> tokens = tokenize(c.text);
            std::uint32_t ord = static_cast<std::uint32_t>(index.chunks_.size());

            StoredChunk stored;
            stored.doc_id = std::move(c.doc_id);
            stored.chunk_index = c.chunk_index;
            stored.text = std::move(c.text);
            stored.length = static_cast<std::uint32_t>(tokens.size());
            index.chunks_.push_back(std::move(stored));

            std::map<std::string, std::uint32_t> counts;
            for (const std::string& t : tokens) {
                ++counts[t];
            }
            for (const auto& [term, tf] : counts) {
                PostingList& pl = index.postings_[term];
                pl.chunk_ords.push_back(ord);
                pl.tfs.push_back(static_cast<double>(tf));
            }
        }
    }
    index.finalize();
    return index;
}

const PassageIndex::PostingList* PassageIndex::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::size_t PassageIndex::doc_freq(const std::string& term) const {
    const PostingList* pl = postings(term);
    return pl ? pl->chunk_ords.size() : 0;
}

json PassageIndex::to_json() const {
    json j;
    j["format"] = "raisf-passage-index";
    j["version"] = 1;
    json chunks = json::array();
    for (const StoredChunk& c : chunks_) {
        chunks.push_back(json{
            {"doc_id", c.doc_id},
            {"chunk_index", c.chunk_index},
            {"text", c.text},
            {"length", c.length},
        });
    }
    j["chunks"] = chunks;
    json postings = json::object();
    for (const auto& [term, pl] : postings_) {
        json entries = json::array();
        for (std::size_t i = 0; i < pl.chunk_ords.size(); ++i) {
            entries.push_back(json::array(
                {pl.chunk_ords[i], static_cast<std::uint64_t>(pl.tfs[i])}));
        }
        postings[term] = entries;
    }
    j["postings"] = postings;
    j["total_tokens"] = total_tokens_;
    return j;
}

namespace {

Error bad_index(const std::string& what) {
    return make_error(Errc::InvalidParams, "passage index: " + what);
}

} // namespace

Result<PassageIndex> PassageIndex::from_json(const json& j) {
    if (!j.is_object()) return bad_index("document is not an object");
    if (!j.contains("format") || j["format"] != "raisf-passage-index") {
        return bad_index("unrecognized format");
    }
    if (!j.contains("version") || j["version"] != 1) {
        return bad_index("unsupported version");
    }
    if (!j.contains("chunks") || !j["chunks"].is_array() || j["chunks"].empty()) {
        return bad_index("missing chunks");
    }
    if (!j.contains("postings") || !j["postings"].is_object()) {
        return bad_index("missing postings");
    }

    PassageIndex index;
    for (const json& cj : j["chunks"]) {
        if (!cj.is_object() || !cj.contains("doc_id") || !cj["doc_id"].is_string() ||
            !cj.contains("chunk_index") || !cj["chunk_index"].is_number_integer() ||
            !cj.contains("text") || !cj["text"].is_string() ||
            !cj.contains("length") || !cj["length"].is_number_unsigned()) {
            return bad_index("malformed chunk");
        }
        StoredChunk c;
        c.doc_id = cj["doc_id"].get<std::string>();
        c.chunk_index = cj["chunk_index"].get<int>();
        c.text = cj["text"].get<std::string>();
        c.length = cj["length"].get<std::uint32_t>();
        index.chunks_.push_back(std::move(c));
    }

    std::size_t num_chunks = index.chunks_.size();
    for (const auto& [term, ej] : j["postings"].items()) {
        if (term.empty() || !ej.is_array() || ej.empty()) {
            return bad_index("malformed posting list");
        }
        PostingList pl;
        std::uint32_t prev = 0;
        bool first = true;
        for (const json& entry : ej) {
            if (!entry.is_array() || entry.size() != 2 ||
                !entry[0].is_number_unsigned() || !entry[1].is_number_unsigned()) {
                return bad_index("malformed posting entry for '" + term + "'");
            }
            std::uint64_t ord = entry[0].get<std::uint64_t>();
            std::uint64_t tf = entry[1].get<std::uint64_t>();
            if (ord >= num_chunks) return bad_index("posting ordinal out of range");
            if (tf == 0) return bad_index("zero term frequency");
            if (!first && static_cast<std::uint32_t>(ord) <= prev) {
                return bad_index("posting ordinals not ascending");
            }
            prev = static_cast<std::uint32_t>(ord);
            first = false;
            pl.chunk_ords.push_back(prev);
            pl.tfs.push_back(static_cast<double>(tf));
        }
        index.postings_[term] = std::move(pl);
    }
    index.finalize();
    return index;
}

Status PassageIndex::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        return make_error(Errc::IoError, "cannot write index file: " + path);
    }
    out << to_json().dump() << "\n";
    if (!out) {
        return make_error(Errc::IoError, "write failed: " + path);
    }
    return ok_status();
}

Result<PassageIndex> PassageIndex::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return make_error(Errc::IoError, "cannot open index file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    json j = json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) {
        return make_error(Errc::InvalidParams, "index file is not valid JSON: " + path);
    }
    return from_json(j);
}

} // namespace raisf
