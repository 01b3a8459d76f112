#include "raisf/core/types.hpp"

#include <cctype>

namespace raisf {

namespace {

std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace

std::string trim_copy(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::string lower_ascii_copy(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Result<Question> new_root_question(const std::string& text, std::uint64_t seq) {
    std::string trimmed = trim_copy(text);
    if (trimmed.empty()) {
        return make_error(Errc::EmptyQuestion, "question text is empty");
    }
    Question q;
    q.text = trimmed;
    q.depth = 0;
    q.id = "q" + std::to_string(seq) + "-" + hex16(fnv1a64(trimmed));
    return q;
}

Question child_question(const Question& parent, std::size_t index, const std::string& text) {
    Question q;
    q.text = trim_copy(text);
    q.depth = parent.depth + 1;
    q.id = parent.id + "." + std::to_string(index) + "-" + hex16(fnv1a64(q.text));
    return q;
}

Answer Answer::unknown() {
    Answer a;
    a.kind = AnswerKind::Unknown;
    a.text = "unknown";
    return a;
}

Answer Answer::answered(std::string text) {
    Answer a;
    a.kind = AnswerKind::Answered;
    a.text = std::move(text);
    return a;
}

Answer Answer::from_model_text(const std::string& raw) {
    std::string trimmed = trim_copy(raw);
    if (trimmed.empty()) {
        return unknown();
    }
    std::string folded = lower_ascii_copy(trimmed);
    if (!folded.empty() && (folded.back() == '.' || folded.back() == '!')) {
        folded.pop_back();
    }
    if (folded == "unknown") {
        return unknown();
    }
    return answered(trimmed);
}

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::EmptyQuestion: return "EmptyQuestion";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidTrace: return "InvalidTrace";
    case Errc::UnparsableVerdict: return "UnparsableVerdict";
    case Errc::UnparsableRelevance: return "UnparsableRelevance";
    case Errc::EmptyDecomposition: return "EmptyDecomposition";
    case Errc::MissingTemplateInput: return "MissingTemplateInput";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::BackendRefusal: return "BackendRefusal";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

const char* to_string(AnswerKind k) {
    return k == AnswerKind::Answered ? "answered" : "unknown";
}

const char* to_string(KnowledgeVerdict v) {
    return v == KnowledgeVerdict::Know ? "know" : "unknow";
}

const char* to_string(RelevanceVerdict v) {
    return v == RelevanceVerdict::Relevant ? "relevant" : "irrelevant";
}

std::optional<AnswerKind> answer_kind_from_string(const std::string& s) {
    if (s == "answered") return AnswerKind::Answered;
    if (s == "unknown") return AnswerKind::Unknown;
    return std::nullopt;
}

std::optional<KnowledgeVerdict> knowledge_verdict_from_string(const std::string& s) {
    if (s == "know") return KnowledgeVerdict::Know;
    if (s == "unknow") return KnowledgeVerdict::Unknow;
    return std::nullopt;
}

std::optional<RelevanceVerdict> relevance_verdict_from_string(const std::string& s) {
    if (s == "relevant") return RelevanceVerdict::Relevant;
    if (s == "irrelevant") return RelevanceVerdict::Irrelevant;
    return std::nullopt;
}

} // namespace raisf
