#include "rinorm/features.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rinorm/error.hpp"
#include "rinorm/span_parser.hpp"

namespace rinorm {

namespace {

constexpr std::array<std::string_view, 9> kSetNames = {"A", "B", "C", "D1", "D2", "D3", "D4", "D5", "E"};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> lowered(const std::vector<Token>& tokens, TokenRange range) {
  std::vector<std::string> out;
  for (std::size_t i = range.first; i < range.last; ++i) out.push_back(to_lower(tokens[i].text));
  return out;
}

// Tokens of a region, lowercased and, for set B style, number-normalized.
std::vector<std::string> region(const std::vector<Token>& tokens, TokenRange range, bool normalize,
                                const RuleTables& rules) {
  std::vector<std::string> words = lowered(tokens, range);
  if (normalize) words = normalize_numbers(words, rules).tokens;
  return words;
}

void add_ngrams(FeatureVector& fv, const std::string& prefix, const std::vector<std::string>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    fv[prefix + words[i]] = 1;
    if (i + 1 < words.size()) fv[prefix + words[i] + "|" + words[i + 1]] = 1;
  }
}

bool is_verb(std::string_view w, const RuleTables& rules) {
  const auto& t = rules.tense;
  if (t.future.count(w) || t.past.count(w) || t.present.count(w)) return true;
  return w.size() >= 5 && w.substr(w.size() - 2) == "ed" && !t.ed_exceptions.count(w);
}

std::size_t sentence_of(const std::vector<TokenRange>& sentences, std::size_t token) {
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (token >= sentences[s].first && token < sentences[s].last) return s;
  }
  return sentences.empty() ? 0 : sentences.size() - 1;
}

void add_previous(FeatureVector& fv, const Document& doc, const TimexMention* prev, const std::string& set,
                  bool with_type, bool with_tokens, const RuleTables& rules) {
  if (!prev) {
    fv[set + ":none"] = 1;
    return;
  }
  if (with_type) fv[set + ":type:" + std::string(to_string(prev->type))] = 1;
  if (with_tokens) {
    for (const auto& w : region(doc.tokens, tokens_in(doc.tokens, prev->start, prev->end), true, rules)) {
      fv[set + ":tok:" + w] = 1;
    }
  }
}

const TimexMention* previous_where(const Document& doc, const TimexMention& ri, bool cross_section,
                                   bool (*accept)(const TimexMention&)) {
  const std::size_t i = doc.timex_index(ri.id);
  if (i == Document::npos) throw DataError("document " + doc.id + ": mention " + ri.id + " is not in the document");
  for (std::size_t j = i; j-- > 0;) {
    const TimexMention& m = doc.timexes[j];
    if (!cross_section && m.section != ri.section) return nullptr;
    if (m.start >= ri.start) continue;
    if (accept(m)) return &m;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(FeatureSet set) noexcept { return kSetNames[static_cast<std::size_t>(set)]; }

FeatureSet parse_feature_set(std::string_view name) {
  for (std::size_t i = 0; i < kSetNames.size(); ++i) {
    if (kSetNames[i] == name) return kFeatureSets[i];
  }
  throw ParseError("feature set", "unknown feature set \"" + std::string(name) + "\"");
}

std::string format_feature_sets(const std::set<FeatureSet>& sets) {
  std::string out;
  for (auto s : sets) {
    if (!out.empty()) out += "+";
    out += to_string(s);
  }
  return out;
}

std::set<FeatureSet> parse_feature_sets(std::string_view text) {
  std::set<FeatureSet> sets;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t plus = std::min(text.find('+', pos), text.size());
    const std::string_view name = text.substr(pos, plus - pos);
    if (name.empty()) throw ParseError("feature set", "empty feature set name in \"" + std::string(text) + "\"");
    sets.insert(parse_feature_set(name));
    pos = plus + 1;
  }
  return sets;
}

void validate(const FeatureConfig& config) {
  if (config.window == 0) throw ParseError("feature.window", "window must be positive");
  if (config.has(FeatureSet::A) && config.has(FeatureSet::B)) {
    throw ParseError("feature.sets", "sets A and B are mutually exclusive (B is A with number normalization)");
  }
  if (!(config.chi2_anchor_point >= 0) || !(config.chi2_anchor_relation >= 0)) {
    throw ParseError("feature.chi2", "chi-square thresholds must be non-negative");
  }
}

std::uint64_t feature_config_hash(const FeatureConfig& config) {
  const std::string key = "window=" + std::to_string(config.window) + ";sets=" + format_feature_sets(config.sets) +
                          ";chi2_anchor_point=" + number(config.chi2_anchor_point) +
                          ";chi2_anchor_relation=" + number(config.chi2_anchor_relation) +
                          ";cross_section_previous=" + (config.cross_section_previous ? "1" : "0");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const TimexMention* find_previous_mention(const Document& doc, const TimexMention& ri, bool cross_section) {
  return previous_where(doc, ri, cross_section, [](const TimexMention&) { return true; });
}

const TimexMention* find_previous_timex(const Document& doc, const TimexMention& ri, bool cross_section) {
  return previous_where(doc, ri, cross_section, [](const TimexMention& m) { return is_date_or_time(m); });
}

const TimexMention* find_previous_absolute(const Document& doc, const TimexMention& ri, bool cross_section) {
  return previous_where(doc, ri, cross_section,
                        [](const TimexMention& m) { return is_date_or_time(m) && m.is_absolute; });
}

std::string_view to_string(Tense tense) noexcept {
  switch (tense) {
    case Tense::Past: return "past";
    case Tense::Present: return "present";
    case Tense::Future: return "future";
    case Tense::Unknown: break;
  }
  return "unknown";
}

Tense detect_tense(const std::vector<std::string>& sentence, const RuleTables& rules) {
  std::vector<std::string> words;
  for (const auto& w : sentence) words.push_back(to_lower(w));
  const auto& t = rules.tense;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    if (t.future.count(words[i])) return Tense::Future;
  }
  for (const auto& w : words) {
    if (t.past.count(w)) return Tense::Past;
    if (w.size() >= 5 && w.substr(w.size() - 2) == "ed" && !t.ed_exceptions.count(w)) return Tense::Past;
  }
  for (const auto& w : words) {
    if (t.present.count(w)) return Tense::Present;
  }
  return Tense::Unknown;
}

std::vector<TokenRange> split_clauses(const std::vector<Token>& tokens, TokenRange sentence,
                                      const RuleTables& rules) {
  const auto has_verb = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      if (is_verb(to_lower(tokens[i].text), rules)) return true;
    }
    return false;
  };
  std::vector<TokenRange> clauses;
  std::size_t start = sentence.first;
  for (std::size_t i = sentence.first; i < sentence.last; ++i) {
    const std::string w = to_lower(tokens[i].text);
    if (w != "," && w != ";" && w != "and" && w != "but") continue;
    if (has_verb(start, i) && has_verb(i + 1, sentence.last)) {
      clauses.push_back({start, i});
      start = i + 1;
    }
  }
  clauses.push_back({start, sentence.last});
  return clauses;
}

FeatureVector extract_features(const Document& doc, const TimexMention& ri, const FeatureConfig& config,
                               const RuleTables& rules) {
  FeatureVector fv;
  const auto& tokens = doc.tokens;
  const TokenRange span = tokens_in(tokens, ri.start, ri.end);
  const TokenRange pre{span.first >= config.window ? span.first - config.window : 0, span.first};
  const TokenRange post{span.last, std::min(tokens.size(), span.last + config.window)};

  for (const auto set : {FeatureSet::A, FeatureSet::B}) {
    if (!config.has(set)) continue;
    const bool normalize = set == FeatureSet::B;
    const std::string name(to_string(set));
    add_ngrams(fv, name + ":win:", region(tokens, pre, normalize, rules));
    add_ngrams(fv, name + ":win:", region(tokens, post, normalize, rules));
    add_ngrams(fv, name + ":span:", region(tokens, span, normalize, rules));
  }

  if (config.has(FeatureSet::C) || config.has(FeatureSet::E)) {
    const auto sentences = split_sentences(tokens, doc.text);
    const TokenRange sentence =
        sentences.empty() ? TokenRange{} : sentences[sentence_of(sentences, span.first)];
    if (config.has(FeatureSet::C) && !sentence.empty()) {
      for (const auto& clause : split_clauses(tokens, sentence, rules)) {
        if (span.first < clause.first || span.first >= clause.last) continue;
        const std::size_t from = tokens[clause.first].start, to = tokens[clause.last - 1].end;
        for (const auto& e : doc.events) {
          if (e.start < from || e.end > to) continue;
          fv["C:type:" + std::string(to_string(e.type))] = 1;
          for (const auto& w : region(tokens, tokens_in(tokens, e.start, e.end), true, rules)) fv["C:tok:" + w] = 1;
        }
      }
    }
    if (config.has(FeatureSet::E)) {
      std::vector<std::string> words;
      for (std::size_t i = sentence.first; i < sentence.last; ++i) words.push_back(tokens[i].text);
      fv["E:tense:" + std::string(to_string(detect_tense(words, rules)))] = 1;
    }
  }

  const bool cross = config.cross_section_previous;
  const TimexMention* prev = nullptr;
  if (config.has(FeatureSet::D1) || config.has(FeatureSet::D2) || config.has(FeatureSet::D5)) {
    prev = find_previous_mention(doc, ri, cross);
  }
  if (config.has(FeatureSet::D1)) add_previous(fv, doc, prev, "D1", true, false, rules);
  if (config.has(FeatureSet::D2)) add_previous(fv, doc, prev, "D2", false, true, rules);
  if (config.has(FeatureSet::D3)) add_previous(fv, doc, find_previous_timex(doc, ri, cross), "D3", true, true, rules);
  if (config.has(FeatureSet::D4)) {
    add_previous(fv, doc, find_previous_absolute(doc, ri, cross), "D4", true, true, rules);
  }
  if (config.has(FeatureSet::D5)) {
    std::string which = "neither";
    if (prev) {
      for (const auto& s : doc.sections) {
        if (prev->start == s.sectime.start && prev->end == s.sectime.end) {
          which = s.kind == SectionKind::ClinicalHistory ? "admission" : "discharge";
        }
      }
    }
    fv["D5:prev:" + which] = 1;
  }
  return fv;
}

double chi_square(const ContingencyTable& t) {
  const double n = t.a + t.b + t.c + t.d;
  const double r1 = t.a + t.b, r2 = t.c + t.d, c1 = t.a + t.c, c2 = t.b + t.d;
  if (n <= 0 || r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 0;
  const double diff = t.a * t.d - t.b * t.c;
  return n * diff * diff / (r1 * r2 * c1 * c2);
}

std::set<std::string> select_features(const std::vector<FeatureVector>& vectors, const std::vector<bool>& labels,
                                      double threshold) {
  if (vectors.size() != labels.size()) throw Error("select_features: vectors and labels differ in length");
  std::map<std::string, std::pair<double, double>> present;  // positive, negative counts
  double positives = 0, negatives = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    (labels[i] ? positives : negatives) += 1;
    for (const auto& [name, weight] : vectors[i]) {
      auto& counts = present[name];
      (labels[i] ? counts.first : counts.second) += 1;
    }
  }
  std::set<std::string> selected;
  for (const auto& [name, counts] : present) {
    const ContingencyTable t{counts.first, counts.second, positives - counts.first, negatives - counts.second};
    if (chi_square(t) >= threshold) selected.insert(selected.end(), name);
  }
  return selected;
}

VocabularyIndex::VocabularyIndex(const std::set<std::string>& names) : names_(names.begin(), names.end()) {
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
}

std::optional<std::size_t> VocabularyIndex::column(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string format_sparse(std::string_view label, const FeatureVector& fv) {
  std::string out(label);
  for (const auto& [name, weight] : fv) out += " " + name + ":" + number(weight);
  return out;
}

std::pair<std::string, FeatureVector> parse_sparse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::pair<std::string, FeatureVector> out;
  if (!(in >> out.first)) throw ParseError("sparse", "empty instance line");
  std::string item;
  while (in >> item) {
    const std::size_t colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ParseError("sparse", "expected name:weight, got " + item);
    std::size_t used = 0;
    double w = 0;
    try {
      w = std::stod(item.substr(colon + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - colon - 1) throw ParseError("sparse", "bad weight in " + item);
    out.second[item.substr(0, colon)] = w;
  }
  return out;
}

}  // namespace rinorm
