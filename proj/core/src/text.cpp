#include "agrinav/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_set>

namespace agrinav {

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string normalize_token(std::string_view token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  auto is_word = [](unsigned char c) { return std::isalnum(c) != 0 || c == '\'' || c == '-'; };
  while (begin < end && !is_word(static_cast<unsigned char>(token[begin]))) ++begin;
  while (end > begin && !is_word(static_cast<unsigned char>(token[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(token[i]))));
  }
  return out;
}

bool is_stopword(const std::string& normalized_token) {
  static const std::unordered_set<std::string> kStopwords = {
      "a",      "an",     "the",    "of",    "in",    "on",     "at",    "to",
      "from",   "into",   "onto",   "with",  "and",   "or",     "but",   "then",
      "so",     "as",     "by",     "for",   "is",    "are",    "was",   "were",
      "be",     "been",   "being",  "am",    "do",    "does",   "did",   "you",
      "your",   "i",      "we",     "my",    "it",    "its",    "this",  "that",
      "these",  "those",  "there",  "here",  "please", "now",   "just",  "some",
      "any",    "will",   "would",  "should", "can",  "could",  "until", "till",
      "when",   "while",  "after",  "before", "up",   "once",   "them",  "they",
  };
  return kStopwords.count(normalized_token) > 0;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& raw : split_whitespace(text)) {
    std::string token = normalize_token(raw);
    if (token.empty() || is_stopword(token)) continue;
    out.push_back(std::move(token));
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace agrinav
