#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "raisf/core/result.hpp"

namespace raisf {

struct DecodingSettings {
    double temperature = 0.0;
    int max_output_tokens = 512;
};

struct AblationSet {
    bool no_skm = false; // skip the self-knowledge probe
    bool no_prm = false; // skip retrieval and relevance filtering
    bool no_qdm = false; // never decompose

    bool any() const { return no_skm || no_prm || no_qdm; }
};

// Parses comma-separated ablation flags ("no-skm,no-prm,no-qdm").
Result<AblationSet> parse_ablation_list(const std::string& spec);
std::string ablation_to_string(const AblationSet& a);

enum class RelevanceMode { Batch, PerPassage };

const char* to_string(RelevanceMode m);

struct EngineConfig {
    int d_th = 3;
    int k_passages = 5;
    int retrieval_length_l = 64;
    AblationSet ablation;
    RelevanceMode relevance_mode = RelevanceMode::Batch;
    bool answer_with_all_retrieved = false;
    int decomposition_fanout_cap = 8;
    DecodingSettings decoding;
    std::uint64_t seed = 0;
};

Status validate(const EngineConfig& cfg);

nlohmann::json engine_config_to_json(const EngineConfig& cfg);
Result<EngineConfig> engine_config_from_json(const nlohmann::json& j);

} // namespace raisf
