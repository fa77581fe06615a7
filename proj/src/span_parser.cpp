#include "rinorm/span_parser.hpp"

#include <array>
#include <cstdio>
#include <regex>

#include "rinorm/error.hpp"
#include "rinorm/text.hpp"

namespace rinorm {

namespace {

struct NumberReading {
  double value = 0;
  bool ordinal = false;
  bool integer = true;
};

bool digits_only(std::string_view s) {
  if (s.empty() || s.size() > 9) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::optional<NumberReading> read_number(std::string_view token, const RuleTables& rules) {
  if (token.empty()) return std::nullopt;
  if (token.front() == '#') {
    auto inner = read_number(token.substr(1), rules);
    if (inner) inner->ordinal = true;
    return inner;
  }
  if (digits_only(token)) return NumberReading{std::stod(std::string(token)), false, true};

  const auto dot = token.find('.');
  if (dot != std::string_view::npos && digits_only(token.substr(0, dot)) &&
      digits_only(token.substr(dot + 1))) {
    return NumberReading{std::stod(std::string(token)), false, false};
  }

  if (token.size() > 2) {
    const auto suffix = to_lower(token.substr(token.size() - 2));
    const auto stem = token.substr(0, token.size() - 2);
    if ((suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th") && digits_only(stem)) {
      return NumberReading{std::stod(std::string(stem)), true, true};
    }
  }

  const auto it = rules.numbers.find(to_lower(token));
  if (it != rules.numbers.end()) {
    return NumberReading{static_cast<double>(it->second.value), it->second.ordinal, true};
  }
  return std::nullopt;
}

bool in(std::string_view word, std::initializer_list<std::string_view> set) {
  for (auto s : set) {
    if (s == word) return true;
  }
  return false;
}

const std::initializer_list<std::string_view> kAfterCues = {
    "later", "after", "following", "next", "subsequently", "afterwards", "afterward", "post",
    "postoperatively", "thereafter", "hence"};
const std::initializer_list<std::string_view> kBeforeCues = {
    "ago", "prior", "before", "earlier", "previous", "previously", "preceding", "last", "beforehand"};

std::optional<TimeUnit> unit_of(std::string_view w) {
  if (in(w, {"day", "days"})) return TimeUnit::Day;
  if (in(w, {"week", "weeks", "wk", "wks"})) return TimeUnit::Week;
  if (in(w, {"month", "months", "mo", "mos"})) return TimeUnit::Month;
  if (in(w, {"year", "years", "yr", "yrs"})) return TimeUnit::Year;
  return std::nullopt;
}

bool is_part_of_day(std::string_view w) {
  return in(w, {"morning", "evening", "afternoon", "night", "mornings", "evenings", "nights"});
}

// Lowercased word tokens of a span. Punctuation other than '#' and '/' is dropped.
std::vector<std::string> span_words(std::string_view text) {
  std::vector<std::string> words;
  for (const auto& t : tokenize(text)) {
    const char c = t.text[0];
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      static_cast<unsigned char>(c) >= 0x80;
    if (word || t.text == "#" || t.text == "/") words.push_back(to_lower(t.text));
  }
  return words;
}

struct TimeMatch {
  TimeOfDay time;
  std::size_t first;
  std::size_t last;
};

std::optional<TimeOfDay> twelve_hour(int hour, int minute, bool pm) {
  if (hour < 1 || hour > 12) return std::nullopt;
  if (hour == 12) hour = 0;
  return TimeOfDay::make(pm ? hour + 12 : hour, minute);
}

std::optional<TimeMatch> find_time(const std::vector<std::string>& w) {
  static const std::regex kCompact(R"(^(\d{1,2})(?::(\d{2}))?(am|pm)$)");
  static const std::regex kClock(R"(^(\d{1,2})(?::(\d{2}))?$)");
  static const std::regex kColon(R"(^(\d{1,2}):(\d{2})$)");
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::smatch m;
    if (w[i] == "noon") return TimeMatch{TimeOfDay(12, 0), i, i + 1};
    if (w[i] == "midnight") return TimeMatch{TimeOfDay(0, 0), i, i + 1};
    if (std::regex_match(w[i], m, kCompact)) {
      const int minute = m[2].matched ? std::stoi(m[2]) : 0;
      if (auto t = twelve_hour(std::stoi(m[1]), minute, m[3] == "pm")) return TimeMatch{*t, i, i + 1};
    }
    if (i + 1 < w.size() && std::regex_match(w[i], m, kClock) &&
        in(w[i + 1], {"am", "pm", "a.m", "p.m"})) {
      const int minute = m[2].matched ? std::stoi(m[2]) : 0;
      if (auto t = twelve_hour(std::stoi(m[1]), minute, w[i + 1][0] == 'p')) {
        return TimeMatch{*t, i, i + 2};
      }
    }
    if (std::regex_match(w[i], m, kColon)) {
      if (auto t = TimeOfDay::make(std::stoi(m[1]), std::stoi(m[2]))) return TimeMatch{*t, i, i + 1};
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> whole(const std::optional<NumberReading>& n) {
  if (!n || !n->integer) return std::nullopt;
  return static_cast<std::int64_t>(n->value);
}

std::optional<ParsedSpan> parse_ordinal(const std::vector<std::string>& w, const RuleTables& rules) {
  for (const auto& trig : rules.triggers) {
    const std::size_t len = trig.words.size();
    for (std::size_t p = 0; p + len <= w.size(); ++p) {
      bool hit = true;
      for (std::size_t k = 0; k < len && hit; ++k) hit = w[p + k] == trig.words[k];
      if (!hit) continue;

      std::optional<std::int64_t> n;
      std::size_t q = p + len;
      while (q < w.size() && in(w[q], {"number", "no", "num", "#"})) ++q;
      if (q < w.size()) n = whole(read_number(w[q], rules));
      if (!n && p > 0) n = whole(read_number(w[p - 1], rules));
      if (n && *n >= 1) {
        ParsedSpan span;
        span.family = SpanFamily::PostEventOrdinal;
        span.quantity = *n;
        span.unit = TimeUnit::Day;
        span.direction_hint = DirectionHint::After;
        span.ordinal_family = trig.family;
        return span;
      }
    }
  }
  return std::nullopt;
}

DirectionHint cue_direction(const std::vector<std::string>& w, std::size_t unit_index) {
  const auto hint_at = [&](std::size_t i) {
    if (in(w[i], kAfterCues)) return DirectionHint::After;
    if (in(w[i], kBeforeCues)) return DirectionHint::Before;
    return DirectionHint::None;
  };
  for (std::size_t i = unit_index + 1; i < w.size(); ++i) {
    if (auto h = hint_at(i); h != DirectionHint::None) return h;
  }
  for (std::size_t i = unit_index; i-- > 0;) {
    if (auto h = hint_at(i); h != DirectionHint::None) return h;
    if (w[i] == "in" || w[i] == "within") return DirectionHint::After;
  }
  return DirectionHint::None;
}

std::optional<ParsedSpan> parse_partial_date(const std::vector<std::string>& w, const RuleTables& rules) {
  const auto month_of = [&](const std::string& s) -> std::optional<int> {
    const auto it = rules.months.find(s);
    if (it == rules.months.end()) return std::nullopt;
    return it->second;
  };
  const auto valid_day = [](std::optional<int> month, std::int64_t day) {
    return day >= 1 && day <= (month ? days_in_month(2000, *month) : 31);
  };
  ParsedSpan span;
  span.family = SpanFamily::PartialDate;

  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto month = month_of(w[i]);
    if (!month) continue;
    span.month = *month;
    std::optional<std::int64_t> day;
    if (i + 1 < w.size()) day = whole(read_number(w[i + 1], rules));
    if (!day && i >= 2 && w[i - 1] == "of") day = whole(read_number(w[i - 2], rules));
    if (!day && i >= 1) day = whole(read_number(w[i - 1], rules));
    if (day) {
      if (!valid_day(month, *day)) return std::nullopt;
      span.day_of_month = static_cast<int>(*day);
    }
    return span;
  }

  // m/d without a year
  for (std::size_t i = 0; i + 2 < w.size(); ++i) {
    if (w[i + 1] != "/") continue;
    const auto m = whole(read_number(w[i], rules));
    const auto d = whole(read_number(w[i + 2], rules));
    if (m && d && *m >= 1 && *m <= 12 && valid_day(static_cast<int>(*m), *d) &&
        (i + 3 >= w.size() || w[i + 3] != "/")) {
      span.month = static_cast<int>(*m);
      span.day_of_month = static_cast<int>(*d);
      return span;
    }
  }

  for (const auto& word : w) {
    const auto n = read_number(word, rules);
    if (n && n->ordinal && n->integer && valid_day(std::nullopt, static_cast<std::int64_t>(n->value))) {
      span.day_of_month = static_cast<int>(n->value);
      return span;
    }
  }
  return std::nullopt;
}

std::string two(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

}  // namespace

std::string_view to_string(SpanFamily family) noexcept {
  switch (family) {
    case SpanFamily::Offset: return "Offset";
    case SpanFamily::PostEventOrdinal: return "PostEventOrdinal";
    case SpanFamily::PartialTime: return "PartialTime";
    case SpanFamily::PartialDate: return "PartialDate";
    case SpanFamily::DeicticDay: return "DeicticDay";
    case SpanFamily::Unparseable: return "Unparseable";
  }
  return "?";
}

std::string_view to_string(DirectionHint hint) noexcept {
  switch (hint) {
    case DirectionHint::Before: return "Before";
    case DirectionHint::After: return "After";
    case DirectionHint::None: return "None";
  }
  return "?";
}

SpanFamily parse_span_family(std::string_view name) {
  static constexpr std::array kFamilies = {SpanFamily::Offset, SpanFamily::PostEventOrdinal,
                                           SpanFamily::PartialTime, SpanFamily::PartialDate,
                                           SpanFamily::DeicticDay, SpanFamily::Unparseable};
  for (auto f : kFamilies) {
    if (to_string(f) == name) return f;
  }
  throw ParseError("span family", "unknown span family '" + std::string(name) + "'");
}

std::string to_string(const ParsedSpan& s) {
  const auto time = [&] { return two(s.time_of_day->hour()) + ":" + two(s.time_of_day->minute()); };
  std::string out(to_string(s.family));
  switch (s.family) {
    case SpanFamily::Offset:
      out += "{" + std::to_string(*s.quantity) + ", " + std::string(to_string(*s.unit)) + ", " +
             std::string(to_string(s.direction_hint));
      if (s.time_of_day) out += ", " + time();
      return out + "}";
    case SpanFamily::PostEventOrdinal:
      return out + "{" + std::to_string(*s.quantity) + ", day, " + *s.ordinal_family + "}";
    case SpanFamily::PartialTime:
      return out + "{" + time() + "}";
    case SpanFamily::PartialDate: {
      std::string body;
      if (s.month) body += "month " + std::to_string(*s.month);
      if (s.day_of_month) body += (body.empty() ? "" : ", ") + std::string("day ") + std::to_string(*s.day_of_month);
      return out + "{" + body + "}";
    }
    case SpanFamily::DeicticDay:
      return out + "{" + std::string(to_string(s.direction_hint)) + "}";
    case SpanFamily::Unparseable:
      return out;
  }
  return out;
}

NormalizedNumbers normalize_numbers(const std::vector<std::string>& tokens, const RuleTables& rules) {
  NormalizedNumbers out;
  out.tokens.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "#" && i + 1 < tokens.size()) {
      if (auto n = read_number(tokens[i + 1], rules)) {
        out.tokens.emplace_back(kNumberToken);
        out.values.push_back(n->value);
        ++i;
        continue;
      }
    }
    if (auto n = read_number(tokens[i], rules)) {
      out.tokens.emplace_back(kNumberToken);
      out.values.push_back(n->value);
    } else {
      out.tokens.push_back(tokens[i]);
    }
  }
  return out;
}

std::optional<TimexValue> parse_absolute(std::string_view text, const RuleTables& rules) {
  const std::string s(text);
  for (const auto& pattern : rules.absolute_patterns) {
    std::smatch m;
    if (!std::regex_match(s, m, pattern.regex)) continue;
    int year = -1, month = -1, day = -1, hour = -1, minute = -1;
    bool ok = true;
    for (std::size_t g = 0; g < pattern.fields.size() && ok; ++g) {
      const std::string field = m[g + 1];
      switch (pattern.fields[g]) {
        case 'y':
          year = std::stoi(field);
          if (field.size() == 2) year += year < rules.two_digit_pivot ? 2000 : 1900;
          else if (field.size() != 4) ok = false;
          break;
        case 'm': month = std::stoi(field); break;
        case 'b': {
          const auto it = rules.months.find(to_lower(field));
          if (it == rules.months.end()) ok = false;
          else month = it->second;
          break;
        }
        case 'd': day = std::stoi(field); break;
        case 'H': hour = std::stoi(field); break;
        case 'M': minute = std::stoi(field); break;
        default: ok = false;
      }
    }
    if (!ok) continue;
    const auto date = CalendarDate::make(year, month, day);
    if (!date) continue;
    if (hour < 0 && minute < 0) return TimexValue{*date};
    const auto time = TimeOfDay::make(hour < 0 ? 0 : hour, minute < 0 ? 0 : minute);
    if (!time) continue;
    return TimexValue{DateTime{*date, *time}};
  }
  return std::nullopt;
}

bool is_absolute(std::string_view text, const RuleTables& rules) {
  return parse_absolute(text, rules).has_value();
}

ParsedSpan parse_span(std::string_view text, const RuleTables& rules) {
  std::vector<std::string> w = span_words(text);
  ParsedSpan span;
  if (w.empty()) return span;

  if (auto ordinal = parse_ordinal(w, rules)) return *ordinal;

  const auto time = find_time(w);
  if (time) w.erase(w.begin() + static_cast<std::ptrdiff_t>(time->first),
                    w.begin() + static_cast<std::ptrdiff_t>(time->last));

  const auto offset = [&](std::int64_t q, TimeUnit unit, DirectionHint hint) {
    ParsedSpan s;
    s.family = SpanFamily::Offset;
    s.quantity = q;
    s.unit = unit;
    s.direction_hint = hint;
    if (time) s.time_of_day = time->time;
    return s;
  };

  for (const auto& word : w) {
    if (word == "yesterday") return offset(1, TimeUnit::Day, DirectionHint::Before);
    if (word == "tomorrow") return offset(1, TimeUnit::Day, DirectionHint::After);
  }

  bool deictic = false;
  for (std::size_t u = 0; u < w.size(); ++u) {
    const auto unit = unit_of(w[u]);
    const bool part_of_day = is_part_of_day(w[u]);
    if (!unit && !part_of_day) continue;
    const TimeUnit grain = unit.value_or(TimeUnit::Day);
    const std::string prev = u > 0 ? w[u - 1] : std::string();
    const std::string next = u + 1 < w.size() ? w[u + 1] : std::string();

    std::optional<std::int64_t> quantity;
    if (u > 0) quantity = whole(read_number(prev, rules));
    if (quantity && read_number(prev, rules)->ordinal) quantity.reset();
    if (!quantity && (prev == "a" || prev == "an")) quantity = 1;
    if (!quantity && prev == "of" && u >= 3 && w[u - 2] == "couple" && w[u - 3] == "a") quantity = 2;

    if (quantity && unit) return offset(*quantity, *unit, cue_direction(w, u));

    if (in(prev, {"next", "following", "subsequent"})) return offset(1, grain, DirectionHint::After);
    if (in(prev, {"previous", "prior", "preceding", "last"})) return offset(1, grain, DirectionHint::Before);
    if (in(prev, {"same", "that", "this"})) {
      deictic = true;
      break;
    }
    // A bare plural ("several days") names no particular day.
    if (grain == TimeUnit::Day && w[u].back() != 's') {
      if (in(next, {"after", "later", "following"})) return offset(1, TimeUnit::Day, DirectionHint::After);
      if (in(next, {"before", "prior", "earlier"})) return offset(1, TimeUnit::Day, DirectionHint::Before);
      deictic = true;
      break;
    }
  }

  if (time) {
    span.family = SpanFamily::PartialTime;
    span.time_of_day = time->time;
    return span;
  }
  if (!deictic) {
    for (const auto& word : w) deictic = deictic || in(word, {"today", "tonight"});
  }
  if (deictic) {
    span.family = SpanFamily::DeicticDay;
    return span;
  }
  if (auto partial = parse_partial_date(w, rules)) return *partial;
  return span;
}

}  // namespace rinorm
