#include "rinorm/text.hpp"

#include <algorithm>

namespace rinorm {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
// Bytes >= 0x80 belong to UTF-8 sequences; treat them as letters so that
// multi-byte characters never get split.
bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || static_cast<unsigned char>(c) >= 0x80;
}
bool is_word(char c) { return is_letter(c) || is_digit(c); }

bool joins(std::string_view text, std::size_t i) {
  if (i == 0 || i + 1 >= text.size()) return false;
  const char prev = text[i - 1];
  const char next = text[i + 1];
  const char c = text[i];
  if ((c == '-' || c == '\'' || c == '.') && is_letter(prev) && is_letter(next)) return true;
  if ((c == '.' || c == ':') && is_digit(prev) && is_digit(next)) return true;
  return false;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, std::size_t base) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!is_word(c)) {
      tokens.push_back({std::string(1, c), base + i, base + i + 1});
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (is_word(text[j]) || joins(text, j))) ++j;
    tokens.push_back({std::string(text.substr(i, j - i)), base + i, base + j});
    i = j;
  }
  return tokens;
}

std::vector<TokenRange> split_sentences(const std::vector<Token>& tokens, std::string_view text) {
  std::vector<TokenRange> out;
  std::size_t first = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bool boundary = false;
    const Token& t = tokens[i];
    if (t.text == "." || t.text == ";" || t.text == "?" || t.text == "!") {
      boundary = t.end >= text.size() || is_space(text[t.end]);
    }
    if (!boundary && i + 1 < tokens.size()) {
      const auto gap = text.substr(t.end, tokens[i + 1].start - t.end);
      boundary = gap.find('\n') != std::string_view::npos;
    }
    if (boundary) {
      out.push_back({first, i + 1});
      first = i + 1;
    }
  }
  if (first < tokens.size()) out.push_back({first, tokens.size()});
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return out;
}

TokenRange tokens_in(const std::vector<Token>& tokens, std::size_t start, std::size_t end) {
  auto first = std::lower_bound(tokens.begin(), tokens.end(), start,
                                [](const Token& t, std::size_t pos) { return t.end <= pos; });
  auto last = std::lower_bound(first, tokens.end(), end,
                               [](const Token& t, std::size_t pos) { return t.start < pos; });
  return {static_cast<std::size_t>(first - tokens.begin()),
          static_cast<std::size_t>(last - tokens.begin())};
}

}  // namespace rinorm
