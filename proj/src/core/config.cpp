#include "raisf/core/config.hpp"

#include "raisf/core/types.hpp"

namespace raisf {

using nlohmann::json;

Result<AblationSet> parse_ablation_list(const std::string& spec) {
    AblationSet out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string item = trim_copy(
            spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty()) {
            if (item == "no-skm") {
                out.no_skm = true;
            } else if (item == "no-prm") {
                out.no_prm = true;
            } else if (item == "no-qdm") {
                out.no_qdm = true;
            } else {
                return make_error(Errc::InvalidConfig, "unknown ablation flag '" + item + "'");
            }
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string ablation_to_string(const AblationSet& a) {
    std::string out;
    auto add = [&out](const char* name) {
        if (!out.empty()) out += ",";
        out += name;
    };
    if (a.no_skm) add("no-skm");
    if (a.no_prm) add("no-prm");
    if (a.no_qdm) add("no-qdm");
    return out;
}

const char* to_string(RelevanceMode m) {
    return m == RelevanceMode::Batch ? "batch" : "per_passage";
}

Status validate(const EngineConfig& cfg) {
    if (cfg.d_th < 0) {
        return make_error(Errc::InvalidConfig, "d_th must be >= 0");
    }
    if (cfg.d_th > 16) {
        return make_error(Errc::InvalidConfig, "d_th above supported limit (16)");
    }
    if (cfg.k_passages < 1) {
        return make_error(Errc::InvalidConfig, "k_passages must be >= 1");
    }
    if (cfg.retrieval_length_l < 1) {
        return make_error(Errc::InvalidConfig, "retrieval_length_l must be >= 1");
    }
    if (cfg.decomposition_fanout_cap < 1) {
        return make_error(Errc::InvalidConfig, "decomposition_fanout_cap must be >= 1");
    }
    if (cfg.decoding.temperature < 0.0) {
        return make_error(Errc::InvalidConfig, "temperature must be >= 0");
    }
    if (cfg.decoding.max_output_tokens < 1) {
        return make_error(Errc::InvalidConfig, "max_output_tokens must be >= 1");
    }
    return ok_status();
}

json engine_config_to_json(const EngineConfig& cfg) {
    json j;
    j["d_th"] = cfg.d_th;
    j["k_passages"] = cfg.k_passages;
    j["retrieval_length_l"] = cfg.retrieval_length_l;
    json ab = json::array();
    if (cfg.ablation.no_skm) ab.push_back("no-skm");
    if (cfg.ablation.no_prm) ab.push_back("no-prm");
    if (cfg.ablation.no_qdm) ab.push_back("no-qdm");
    j["ablation"] = ab;
    j["relevance_mode"] = to_string(cfg.relevance_mode);
    j["answer_with_all_retrieved"] = cfg.answer_with_all_retrieved;
    j["decomposition_fanout_cap"] = cfg.decomposition_fanout_cap;
    j["decoding"] = json{
        {"temperature", cfg.decoding.temperature},
        {"max_output_tokens", cfg.decoding.max_output_tokens},
    };
    j["seed"] = cfg.seed;
    return j;
}

Result<EngineConfig> engine_config_from_json(const json& j) {
    if (!j.is_object()) {
        return make_error(Errc::InvalidConfig, "engine config must be an object");
    }
    EngineConfig cfg;
    auto get_int = [&j](const char* key, int& out) -> bool {
        if (!j.contains(key)) return true;
        if (!j[key].is_number_integer()) return false;
        out = j[key].get<int>();
        return true;
    };
    if (!get_int("d_th", cfg.d_th)) {
        return make_error(Errc::InvalidConfig, "d_th must be an integer");
    }
    if (!get_int("k_passages", cfg.k_passages)) {
        return make_error(Errc::InvalidConfig, "k_passages must be an integer");
    }
    if (!get_int("retrieval_length_l", cfg.retrieval_length_l)) {
        return make_error(Errc::InvalidConfig, "retrieval_length_l must be an integer");
    }
    if (!get_int("decomposition_fanout_cap", cfg.decomposition_fanout_cap)) {
        return make_error(Errc::InvalidConfig, "decomposition_fanout_cap must be an integer");
    }
    if (j.contains("ablation")) {
        const json& ab = j["ablation"];
        if (ab.is_string()) {
            Result<AblationSet> parsed = parse_ablation_list(ab.get<std::string>());
            if (!parsed.ok()) return parsed.error();
            cfg.ablation = parsed.value();
        } else if (ab.is_array()) {
            std::string joined;
            for (const json& item : ab) {
                if (!item.is_string()) {
                    return make_error(Errc::InvalidConfig, "ablation entries must be strings");
                }
                if (!joined.empty()) joined += ",";
                joined += item.get<std::string>();
            }
            Result<AblationSet> parsed = parse_ablation_list(joined);
            if (!parsed.ok()) return parsed.error();
            cfg.ablation = parsed.value();
        } else {
            return make_error(Errc::InvalidConfig, "ablation must be string or array");
        }
    }
    if (j.contains("relevance_mode")) {
        if (!j["relevance_mode"].is_string()) {
            return make_error(Errc::InvalidConfig, "relevance_mode must be a string");
        }
        std::string mode = j["relevance_mode"].get<std::string>();
        if (mode == "batch") {
            cfg.relevance_mode = RelevanceMode::Batch;
        } else if (mode == "per_passage") {
            cfg.relevance_mode = RelevanceMode::PerPassage;
        } else {
            return make_error(Errc::InvalidConfig, "unknown relevance_mode '" + mode + "'");
        }
    }
    if (j.contains("answer_with_all_retrieved")) {
        if (!j["answer_with_all_retrieved"].is_boolean()) {
            return make_error(Errc::InvalidConfig, "answer_with_all_retrieved must be a boolean");
        }
        cfg.answer_with_all_retrieved = j["answer_with_all_retrieved"].get<bool>();
    }
    if (j.contains("decoding")) {
        const json& d = j["decoding"];
        if (!d.is_object()) {
            return make_error(Errc::InvalidConfig, "decoding must be an object");
        }
        if (d.contains("temperature")) {
            if (!d["temperature"].is_number()) {
                return make_error(Errc::InvalidConfig, "temperature must be a number");
            }
            cfg.decoding.temperature = d["temperature"].get<double>();
        }
        if (d.contains("max_output_tokens")) {
            if (!d["max_output_tokens"].is_number_integer()) {
                return make_error(Errc::InvalidConfig, "max_output_tokens must be an integer");
            }
            cfg.decoding.max_output_tokens = d["max_output_tokens"].get<int>();
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned()) {
            return make_error(Errc::InvalidConfig, "seed must be an integer");
        }
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    Status s = validate(cfg);
    if (!s.ok()) return s.error();
    return cfg;
}

} // namespace raisf
