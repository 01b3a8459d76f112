#pragma once

#include <string>
#include <vector>

namespace raisf {

// Lowercases ASCII letters and splits on any byte that is neither ASCII
// alphanumeric nor >= 0x80 (multi-byte UTF-8 sequences stay inside tokens).
// No stemming, no stopword removal.
std::vector<std::string> tokenize(const std::string& text);

} // namespace raisf
