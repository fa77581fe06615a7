#include "rinorm/rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rinorm/error.hpp"
#include "rules_data.hpp"

namespace rinorm {

namespace {

struct Record {
  std::vector<std::string> fields;
  std::string tail;  // the line after the first field, leading blanks removed
};

std::vector<Record> records(const std::string& source) {
  std::vector<Record> out;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    Record rec;
    std::istringstream fields(line);
    std::string f;
    while (fields >> f) rec.fields.push_back(f);
    if (rec.fields.empty()) continue;
    const auto first_end = line.find(rec.fields[0]) + rec.fields[0].size();
    const auto tail_start = line.find_first_not_of(" \t", first_end);
    if (tail_start != std::string::npos) rec.tail = line.substr(tail_start);
    out.push_back(std::move(rec));
  }
  return out;
}

[[noreturn]] void bad(std::string_view table, const std::vector<std::string>& rec) {
  std::string joined;
  for (const auto& f : rec) joined += (joined.empty() ? "" : " ") + f;
  throw ParseError(std::string(table), std::string(table) + ": malformed entry '" + joined + "'");
}

int parse_int(std::string_view table, const std::vector<std::string>& rec, const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) bad(table, rec);
    return v;
  } catch (const std::logic_error&) {
    bad(table, rec);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read rule table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::optional<int> RuleTables::family_offset(std::string_view family) const {
  const auto it = family_offsets.find(family);
  if (it == family_offsets.end()) return std::nullopt;
  return it->second;
}

RuleSources builtin_rule_sources() {
  return {std::string(data::kNumberWords), std::string(data::kOrdinalFamilies),
          std::string(data::kAbsolutePatterns), std::string(data::kTenseRules)};
}

RuleTables parse_rules(const RuleSources& sources) {
  RuleTables t;

  for (const auto& r : records(sources.number_words)) {
    const auto& rec = r.fields;
    if (rec.size() != 3 || (rec[2] != "cardinal" && rec[2] != "ordinal")) bad("number_words", rec);
    t.numbers[rec[0]] = NumberWord{parse_int("number_words", rec, rec[1]), rec[2] == "ordinal"};
  }

  for (const auto& r : records(sources.ordinal_families)) {
    const auto& rec = r.fields;
    if (rec[0] == "family" && rec.size() == 3) {
      t.family_offsets[rec[1]] = parse_int("ordinal_families", rec, rec[2]);
    } else if (rec[0] == "trigger" && rec.size() >= 3) {
      t.triggers.push_back({std::vector<std::string>(rec.begin() + 2, rec.end()), rec[1]});
    } else {
      bad("ordinal_families", rec);
    }
  }
  for (const auto& trig : t.triggers) {
    if (!t.family_offsets.contains(trig.family)) {
      throw ParseError("ordinal_families", "ordinal_families: trigger for undeclared family '" + trig.family + "'");
    }
  }
  std::stable_sort(t.triggers.begin(), t.triggers.end(),
                   [](const auto& a, const auto& b) { return a.words.size() > b.words.size(); });

  for (const auto& r : records(sources.absolute_patterns)) {
    const auto& rec = r.fields;
    if (rec[0] == "pivot" && rec.size() == 2) {
      t.two_digit_pivot = parse_int("absolute_patterns", rec, rec[1]);
    } else if (rec[0] == "month" && rec.size() == 3) {
      t.months[rec[1]] = parse_int("absolute_patterns", rec, rec[2]);
    } else if (rec.size() >= 2 && rec[0].find_first_not_of("ymbdHM") == std::string::npos) {
      const std::string& source = r.tail;
      try {
        std::regex re(source, std::regex::ECMAScript | std::regex::icase);
        if (re.mark_count() != rec[0].size()) bad("absolute_patterns", rec);
        t.absolute_patterns.push_back({rec[0], source, std::move(re)});
      } catch (const std::regex_error&) {
        bad("absolute_patterns", rec);
      }
    } else {
      bad("absolute_patterns", rec);
    }
  }

  for (const auto& r : records(sources.tense_rules)) {
    const auto& rec = r.fields;
    std::set<std::string, std::less<>>* target = nullptr;
    if (rec[0] == "future") target = &t.tense.future;
    else if (rec[0] == "past") target = &t.tense.past;
    else if (rec[0] == "present") target = &t.tense.present;
    else if (rec[0] == "ed_exceptions") target = &t.tense.ed_exceptions;
    else bad("tense_rules", rec);
    target->insert(rec.begin() + 1, rec.end());
  }
  return t;
}

const RuleTables& default_rules() {
  static const RuleTables tables = parse_rules(builtin_rule_sources());
  return tables;
}

RuleTables load_rules(const std::filesystem::path& dir) {
  RuleSources sources = builtin_rule_sources();
  const auto maybe = [&](const char* name, std::string& slot) {
    const auto path = dir / name;
    if (std::filesystem::exists(path)) slot = read_file(path);
  };
  maybe("number_words.txt", sources.number_words);
  maybe("ordinal_families.txt", sources.ordinal_families);
  maybe("absolute_patterns.txt", sources.absolute_patterns);
  maybe("tense_rules.txt", sources.tense_rules);
  return parse_rules(sources);
}

}  // namespace rinorm
