#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dialogaug {

// Metric tokenizer shared by BLEU and BERTScore: NFKC, lowercase, split on
// Unicode whitespace, and split each of . , ? ! : ; into its own token.
std::vector<std::string> tokenize(std::string_view text);

// Trims ASCII and Unicode whitespace from both ends.
std::string trim(std::string_view text);

bool is_blank(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace dialogaug
