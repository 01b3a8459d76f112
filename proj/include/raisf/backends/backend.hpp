#pragma once

#include <string>

#include "raisf/core/config.hpp"
#include "raisf/core/result.hpp"

namespace raisf {

enum class ModelRole { Know, Relevance, Decompose, Answer, Aggregate };

const char* to_string(ModelRole role);

class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    // Returns the raw completion text. Errors: BackendUnavailable when the
    // backend cannot serve the request, BackendRefusal when it produced an
    // empty or unusable completion.
    virtual Result<std::string> complete(ModelRole role,
                                         const std::string& prompt,
                                         const DecodingSettings& decoding) = 0;

    virtual std::string name() const = 0;
};

} // namespace raisf
