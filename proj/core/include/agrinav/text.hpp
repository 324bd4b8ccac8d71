#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agrinav {

// Whitespace-separated tokens, punctuation untouched.
std::vector<std::string> split_whitespace(std::string_view text);

// Lowercased with leading/trailing punctuation stripped; empty result means
// the token was pure punctuation.
std::string normalize_token(std::string_view token);

// Fixed list of common English function words, used when comparing
// instruction text against subtask descriptions. Checked in rather than
// environment-derived so results are identical everywhere.
bool is_stopword(const std::string& normalized_token);

// Lowercased, punctuation-stripped tokens with stopwords removed.
std::vector<std::string> content_tokens(std::string_view text);

// 64-bit FNV-1a, used for template digests in run stamps.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

}  // namespace agrinav
