#include "raisf/core/trace.hpp"

namespace raisf {

using nlohmann::json;

const char* to_string(Branch b) {
    switch (b) {
    case Branch::SelfKnowledge: return "self_knowledge";
    case Branch::RetrievalAnswer: return "retrieval_answer";
    case Branch::Decomposed: return "decomposed";
    case Branch::DepthExceeded: return "depth_exceeded";
    }
    return "depth_exceeded";
}

std::optional<Branch> branch_from_string(const std::string& s) {
    if (s == "self_knowledge") return Branch::SelfKnowledge;
    if (s == "retrieval_answer") return Branch::RetrievalAnswer;
    if (s == "decomposed") return Branch::Decomposed;
    if (s == "depth_exceeded") return Branch::DepthExceeded;
    return std::nullopt;
}

namespace {

Status trace_fail(const std::string& node_id, const std::string& what) {
    return make_error(Errc::InvalidTrace, "node '" + node_id + "': " + what);
}

Status validate_node(const SolveTrace& t, int d_th) {
    const std::string& id = t.question.id;
    if (id.empty()) {
        return make_error(Errc::InvalidTrace, "node has empty question id");
    }
    if (trim_copy(t.question.text).empty()) {
        return trace_fail(id, "question text is empty");
    }
    if (t.question.depth < 0) {
        return trace_fail(id, "negative depth");
    }
    if (t.answer.is_unknown() && t.answer.text != "unknown") {
        return trace_fail(id, "unknown answer must carry text \"unknown\"");
    }
    if (!t.answer.is_unknown() && trim_copy(t.answer.text).empty()) {
        return trace_fail(id, "answered answer with empty text");
    }

    for (std::size_t idx : t.relevant_indices) {
        if (idx >= t.retrieved.size()) {
            return trace_fail(id, "relevant index out of range");
        }
    }

    std::uint64_t child_nodes = 0;
    std::uint64_t child_retrievals = 0;
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        const SolveTrace& c = t.children[i];
        if (c.question.depth != t.question.depth + 1) {
            return trace_fail(id, "child depth is not parent depth + 1");
        }
        child_nodes += c.node_count;
        child_retrievals += c.retrieval_calls;
        Status s = validate_node(c, d_th);
        if (!s.ok()) return s;
    }
    if (t.node_count != 1 + child_nodes) {
        return trace_fail(id, "node_count does not equal 1 + children total");
    }
    if (t.retrieval_calls < child_retrievals) {
        return trace_fail(id, "retrieval_calls below children total");
    }
    std::uint64_t local_retrievals = t.retrieval_calls - child_retrievals;
    if (local_retrievals > 1) {
        return trace_fail(id, "node accounts for more than one retrieval call");
    }

    bool depth_gated = t.question.depth > d_th;
    if (depth_gated && t.branch != Branch::DepthExceeded) {
        return trace_fail(id, "node beyond depth threshold is not depth_exceeded");
    }

    switch (t.branch) {
    case Branch::SelfKnowledge:
        if (!t.knowledge_verdict || *t.knowledge_verdict != KnowledgeVerdict::Know) {
            return trace_fail(id, "self_knowledge without a know verdict");
        }
        if (!t.retrieved.empty() || !t.children.empty() || t.decomposition ||
            local_retrievals != 0) {
            return trace_fail(id, "self_knowledge node with retrieval or children");
        }
        break;
    case Branch::RetrievalAnswer:
        if (t.relevant_indices.empty()) {
            return trace_fail(id, "retrieval_answer with no relevant passages");
        }
        if (!t.children.empty() || t.decomposition) {
            return trace_fail(id, "retrieval_answer node with children");
        }
        if (local_retrievals != 1) {
            return trace_fail(id, "retrieval_answer did not count its retrieval");
        }
        break;
    case Branch::Decomposed:
        if (!t.decomposition || t.decomposition->sub_questions.empty()) {
            return trace_fail(id, "decomposed node without sub-questions");
        }
        if (t.children.size() != t.decomposition->sub_questions.size()) {
            return trace_fail(id, "children do not match sub-questions");
        }
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (t.children[i].question.text !=
                trim_copy(t.decomposition->sub_questions[i])) {
                return trace_fail(id, "child question text out of order");
            }
        }
        break;
    case Branch::DepthExceeded:
        if (!t.answer.is_unknown()) {
            return trace_fail(id, "depth_exceeded node with an answer");
        }
        if (!t.children.empty() || t.decomposition) {
            return trace_fail(id, "depth_exceeded node with children");
        }
        if (depth_gated && (local_retrievals != 0 || !t.retrieved.empty())) {
            return trace_fail(id, "depth-gated node performed retrieval");
        }
        break;
    }
    return ok_status();
}

json passage_to_json(const Passage& p) {
    return json{
        {"doc_id", p.doc_id},
        {"chunk_index", p.chunk_index},
        {"text", p.text},
        {"score", p.score},
    };
}

json node_to_json(const SolveTrace& t) {
    json j;
    j["question"] = json{
        {"id", t.question.id},
        {"text", t.question.text},
        {"depth", t.question.depth},
    };
    j["branch"] = to_string(t.branch);
    if (t.knowledge_verdict) {
        j["knowledge_verdict"] = to_string(*t.knowledge_verdict);
    } else {
        j["knowledge_verdict"] = nullptr;
    }
    j["retrieved"] = json::array();
    for (const Passage& p : t.retrieved) {
        j["retrieved"].push_back(passage_to_json(p));
    }
    j["relevant_indices"] = json::array();
    for (std::size_t idx : t.relevant_indices) {
        j["relevant_indices"].push_back(idx);
    }
    if (t.decomposition) {
        j["decomposition"] = t.decomposition->sub_questions;
    } else {
        j["decomposition"] = nullptr;
    }
    j["children"] = json::array();
    for (const SolveTrace& c : t.children) {
        j["children"].push_back(node_to_json(c));
    }
    j["answer"] = json{
        {"kind", to_string(t.answer.kind)},
        {"text", t.answer.text},
    };
    j["retrieval_calls"] = t.retrieval_calls;
    j["node_count"] = t.node_count;
    j["notes"] = t.notes;
    return j;
}

Error bad_trace(const std::string& what) {
    return make_error(Errc::InvalidTrace, what);
}

Result<SolveTrace> node_from_json(const json& j) {
    if (!j.is_object()) return bad_trace("trace node is not an object");

    SolveTrace t;

    if (!j.contains("question") || !j["question"].is_object()) {
        return bad_trace("missing question object");
    }
    const json& q = j["question"];
    if (!q.contains("id") || !q["id"].is_string() ||
        !q.contains("text") || !q["text"].is_string() ||
        !q.contains("depth") || !q["depth"].is_number_integer()) {
        return bad_trace("malformed question object");
    }
    t.question.id = q["id"].get<std::string>();
    t.question.text = q["text"].get<std::string>();
    t.question.depth = q["depth"].get<int>();

    if (!j.contains("branch") || !j["branch"].is_string()) {
        return bad_trace("missing branch");
    }
    auto branch = branch_from_string(j["branch"].get<std::string>());
    if (!branch) return bad_trace("unknown branch value");
    t.branch = *branch;

    if (!j.contains("knowledge_verdict")) return bad_trace("missing knowledge_verdict");
    if (j["knowledge_verdict"].is_string()) {
        auto v = knowledge_verdict_from_string(j["knowledge_verdict"].get<std::string>());
        if (!v) return bad_trace("unknown knowledge_verdict value");
        t.knowledge_verdict = *v;
    } else if (!j["knowledge_verdict"].is_null()) {
        return bad_trace("knowledge_verdict must be string or null");
    }

    if (!j.contains("retrieved") || !j["retrieved"].is_array()) {
        return bad_trace("missing retrieved array");
    }
    for (const json& pj : j["retrieved"]) {
        if (!pj.is_object() || !pj.contains("doc_id") || !pj["doc_id"].is_string() ||
            !pj.contains("chunk_index") || !pj["chunk_index"].is_number_integer() ||
            !pj.contains("text") || !pj["text"].is_string() ||
            !pj.contains("score") || !pj["score"].is_number()) {
            return bad_trace("malformed passage");
        }
        Passage p;
        p.doc_id = pj["doc_id"].get<std::string>();
        p.chunk_index = pj["chunk_index"].get<int>();
        p.text = pj["text"].get<std::string>();
        p.score = pj["score"].get<double>();
        t.retrieved.push_back(std::move(p));
    }

    if (!j.contains("relevant_indices") || !j["relevant_indices"].is_array()) {
        return bad_trace("missing relevant_indices array");
    }
    for (const json& ij : j["relevant_indices"]) {
        if (!ij.is_number_unsigned() && !ij.is_number_integer()) {
            return bad_trace("relevant index is not an integer");
        }
        auto v = ij.get<std::int64_t>();
        if (v < 0) return bad_trace("negative relevant index");
        t.relevant_indices.insert(static_cast<std::size_t>(v));
    }

    if (!j.contains("decomposition")) return bad_trace("missing decomposition");
    if (j["decomposition"].is_array()) {
        Decomposition d;
        for (const json& sj : j["decomposition"]) {
            if (!sj.is_string()) return bad_trace("sub-question is not a string");
            d.sub_questions.push_back(sj.get<std::string>());
        }
        t.decomposition = std::move(d);
    } else if (!j["decomposition"].is_null()) {
        return bad_trace("decomposition must be array or null");
    }

    if (!j.contains("children") || !j["children"].is_array()) {
        return bad_trace("missing children array");
    }
    for (const json& cj : j["children"]) {
        Result<SolveTrace> c = node_from_json(cj);
        if (!c.ok()) return c.error();
        t.children.push_back(std::move(c).value());
    }

    if (!j.contains("answer") || !j["answer"].is_object()) {
        return bad_trace("missing answer object");
    }
    const json& a = j["answer"];
    if (!a.contains("kind") || !a["kind"].is_string() ||
        !a.contains("text") || !a["text"].is_string()) {
        return bad_trace("malformed answer object");
    }
    auto kind = answer_kind_from_string(a["kind"].get<std::string>());
    if (!kind) return bad_trace("unknown answer kind");
    t.answer.kind = *kind;
    t.answer.text = a["text"].get<std::string>();

    if (!j.contains("retrieval_calls") || !j["retrieval_calls"].is_number_unsigned()) {
        return bad_trace("missing retrieval_calls");
    }
    t.retrieval_calls = j["retrieval_calls"].get<std::uint64_t>();

    if (!j.contains("node_count") || !j["node_count"].is_number_unsigned()) {
        return bad_trace("missing node_count");
    }
    t.node_count = j["node_count"].get<std::uint64_t>();

    if (!j.contains("notes") || !j["notes"].is_array()) {
        return bad_trace("missing notes array");
    }
    for (const json& nj : j["notes"]) {
        if (!nj.is_string()) return bad_trace("note is not a string");
        t.notes.push_back(nj.get<std::string>());
    }
    return t;
}

} // namespace

Status validate_trace(const SolveTrace& trace, int d_th) {
    if (d_th < 0) {
        return make_error(Errc::InvalidParams, "depth threshold must be non-negative");
    }
    return validate_node(trace, d_th);
}

json trace_to_json(const SolveTrace& trace) {
    json j;
    j["format"] = "raisf-trace";
    j["version"] = 1;
    j["root"] = node_to_json(trace);
    return j;
}

Result<SolveTrace> trace_from_json(const json& j) {
    if (!j.is_object()) return bad_trace("trace document is not an object");
    if (!j.contains("format") || j["format"] != "raisf-trace") {
        return bad_trace("unrecognized trace format");
    }
    if (!j.contains("version") || j["version"] != 1) {
        return bad_trace("unsupported trace version");
    }
    if (!j.contains("root")) return bad_trace("missing root node");
    return node_from_json(j["root"]);
}

std::string trace_to_string(const SolveTrace& trace) {
    return trace_to_json(trace).dump(2) + "\n";
}

Result<SolveTrace> trace_from_string(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        return bad_trace("trace is not valid JSON");
    }
    return trace_from_json(j);
}

} // namespace raisf
