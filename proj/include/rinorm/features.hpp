#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rinorm/document.hpp"
#include "rinorm/rules.hpp"

namespace rinorm {

enum class FeatureSet { A, B, C, D1, D2, D3, D4, D5, E };

inline constexpr std::array<FeatureSet, 9> kFeatureSets = {FeatureSet::A,  FeatureSet::B,  FeatureSet::C,
                                                           FeatureSet::D1, FeatureSet::D2, FeatureSet::D3,
                                                           FeatureSet::D4, FeatureSet::D5, FeatureSet::E};

std::string_view to_string(FeatureSet set) noexcept;
FeatureSet parse_feature_set(std::string_view name);

struct FeatureConfig {
  std::size_t window = 8;
  std::set<FeatureSet> sets = {FeatureSet::B, FeatureSet::D1, FeatureSet::D2};
  double chi2_anchor_point = 7.88;
  double chi2_anchor_relation = 9.58;
  // Previous-mention search may cross from the hospital course back into the history.
  bool cross_section_previous = true;

  bool has(FeatureSet set) const { return sets.count(set) > 0; }
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// "B+D1+D2" <-> {B, D1, D2}. Throws ParseError on unknown names.
std::string format_feature_sets(const std::set<FeatureSet>& sets);
std::set<FeatureSet> parse_feature_sets(std::string_view text);

// Throws ParseError if A and B are both enabled, the window is zero, or a
// threshold is negative.
void validate(const FeatureConfig& config);

// Stable 64-bit FNV-1a digest of everything that changes extracted features.
std::uint64_t feature_config_hash(const FeatureConfig& config);

// Namespaced feature name -> weight; names sort, so iteration is deterministic.
using FeatureVector = std::map<std::string, double>;

// Nearest preceding mentions of `ri` in document order. With cross_section
// false the search stays inside ri's section.
const TimexMention* find_previous_mention(const Document& doc, const TimexMention& ri, bool cross_section = true);
const TimexMention* find_previous_timex(const Document& doc, const TimexMention& ri, bool cross_section = true);
const TimexMention* find_previous_absolute(const Document& doc, const TimexMention& ri, bool cross_section = true);

// Feature names:
//   A:win:<tok>  A:win:<tok>|<tok>  A:span:...   lowercased window/span n-grams
//   B:...                                         same, numbers replaced by NUM
//   C:type:<EVENT type>  C:tok:<tok>              events in the RI-TIMEX's clause
//   D1:type:<TYPE>  D2:tok:<tok>                  previous mention of any type
//   D3:type/tok, D4:type/tok                      previous DATE/TIME, previous absolute
//   D5:prev:admission|discharge|neither           previous mention is a SECTIME
//   E:tense:<tense>                               tense of the RI-TIMEX's sentence
// Missing previous mentions give D*:none.
FeatureVector extract_features(const Document& doc, const TimexMention& ri, const FeatureConfig& config,
                               const RuleTables& rules = default_rules());

enum class Tense { Past, Present, Future, Unknown };
std::string_view to_string(Tense tense) noexcept;

Tense detect_tense(const std::vector<std::string>& sentence, const RuleTables& rules = default_rules());

// Token index ranges of the clauses of a sentence: split at ',', ';', "and" and
// "but" when both sides contain a verb.
std::vector<TokenRange> split_clauses(const std::vector<Token>& tokens, TokenRange sentence,
                                      const RuleTables& rules = default_rules());

// 2x2 counts: a = feature present & label positive, b = present & negative,
// c = absent & positive, d = absent & negative.
struct ContingencyTable {
  double a = 0, b = 0, c = 0, d = 0;
};

// Pearson chi-square; 0 when any marginal is 0.
double chi_square(const ContingencyTable& table);

// Features whose chi-square against the labels reaches the threshold.
std::set<std::string> select_features(const std::vector<FeatureVector>& vectors, const std::vector<bool>& labels,
                                      double threshold);

// Dense column indices for a frozen feature set.
class VocabularyIndex {
 public:
  VocabularyIndex() = default;
  explicit VocabularyIndex(const std::set<std::string>& names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t column) const { return names_.at(column); }
  // Column of a feature, or nullopt for features unseen at training time.
  std::optional<std::size_t> column(std::string_view name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One instance per line: label then name:weight pairs, names sorted.
std::string format_sparse(std::string_view label, const FeatureVector& fv);
std::pair<std::string, FeatureVector> parse_sparse(std::string_view line);

}  // namespace rinorm
