#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rinorm {

struct Token {
  std::string text;
  std::size_t start = 0;  // character offsets into the source text, half-open
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// Whitespace split, then punctuation split off as single-character tokens.
// '-', '\'' and '.' stay inside a token when flanked by letters
// ("post-operative"), '.' and ':' when flanked by digits ("23.1", "6:00").
// Offsets are relative to `text` plus `base`.
std::vector<Token> tokenize(std::string_view text, std::size_t base = 0);

// Half-open token index range.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool empty() const noexcept { return first >= last; }
  std::size_t size() const noexcept { return last - first; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// Sentences end after '.', ';', '?' or '!' followed by whitespace (or end of
// text), and wherever a newline separates two tokens.
std::vector<TokenRange> split_sentences(const std::vector<Token>& tokens, std::string_view text);

std::string to_lower(std::string_view s);

// Tokens overlapping the character range [start, end).
TokenRange tokens_in(const std::vector<Token>& tokens, std::size_t start, std::size_t end);

}  // namespace rinorm
