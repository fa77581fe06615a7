#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rinorm {

struct NumberWord {
  int value = 0;
  bool ordinal = false;
};

struct OrdinalTrigger {
  std::vector<std::string> words;
  std::string family;
};

struct AbsolutePattern {
  std::string fields;  // one of y m b d H M per capture group
  std::string source;
  std::regex regex;
};

struct TenseLexicon {
  std::set<std::string, std::less<>> future;
  std::set<std::string, std::less<>> past;
  std::set<std::string, std::less<>> present;
  std::set<std::string, std::less<>> ed_exceptions;
};

// Rule tables behind span parsing, number normalization and tense detection.
// Immutable once built; safe to share between threads.
struct RuleTables {
  std::map<std::string, NumberWord, std::less<>> numbers;
  std::map<std::string, int, std::less<>> family_offsets;
  std::vector<OrdinalTrigger> triggers;  // longest first
  std::vector<AbsolutePattern> absolute_patterns;
  std::map<std::string, int, std::less<>> months;
  int two_digit_pivot = 30;
  TenseLexicon tense;

  std::optional<int> family_offset(std::string_view family) const;
};

struct RuleSources {
  std::string number_words;
  std::string ordinal_families;
  std::string absolute_patterns;
  std::string tense_rules;
};

// Text of the data files shipped with the library.
RuleSources builtin_rule_sources();

// Throws ParseError naming the table and line.
RuleTables parse_rules(const RuleSources& sources);

// Tables built from the shipped data files, parsed once on first use.
const RuleTables& default_rules();

// Reads number_words.txt, ordinal_families.txt, absolute_patterns.txt and
// tense_rules.txt from `dir`; a missing file falls back to the shipped one.
RuleTables load_rules(const std::filesystem::path& dir);

}  // namespace rinorm
