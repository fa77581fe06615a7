#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/calendar.hpp"
#include "rinorm/rules.hpp"
#include "rinorm/timex.hpp"

namespace rinorm {

enum class SpanFamily { Offset, PostEventOrdinal, PartialTime, PartialDate, DeicticDay, Unparseable };
enum class DirectionHint { Before, After, None };

// Structured reading of an RI-TIMEX surface span.
//   Offset            quantity + unit, direction from lexical cues
//   PostEventOrdinal  "postoperative day two": quantity >= 1, unit day, family tag
//   PartialTime       time of day only
//   PartialDate       day-of-month and/or month, no year
//   DeicticDay        "today", "that day", "the day of admission"
struct ParsedSpan {
  SpanFamily family = SpanFamily::Unparseable;
  std::optional<std::int64_t> quantity;
  std::optional<TimeUnit> unit;
  DirectionHint direction_hint = DirectionHint::None;
  std::optional<TimeOfDay> time_of_day;
  std::optional<int> day_of_month;
  std::optional<int> month;
  std::optional<std::string> ordinal_family;

  friend bool operator==(const ParsedSpan&, const ParsedSpan&) = default;
};

std::string_view to_string(SpanFamily family) noexcept;
std::string_view to_string(DirectionHint hint) noexcept;
SpanFamily parse_span_family(std::string_view name);

// Compact form used by the CLI: Offset{1, day, After}, PartialTime{06:00}, ...
std::string to_string(const ParsedSpan& span);

inline constexpr std::string_view kNumberToken = "NUM";

struct NormalizedNumbers {
  std::vector<std::string> tokens;
  std::vector<double> values;  // one per NUM token, in order

  friend bool operator==(const NormalizedNumbers&, const NormalizedNumbers&) = default;
};

// Replaces digit numbers ("2", "23.1"), suffixed ordinals ("2nd"), '#'-prefixed
// numbers ("#2", or "#" followed by a number token) and lexicon words ("two",
// "second") with NUM. Other tokens pass through unchanged.
NormalizedNumbers normalize_numbers(const std::vector<std::string>& tokens,
                                    const RuleTables& rules = default_rules());

// Date or DateTime value of a span written in one of the absolute formats, if any.
std::optional<TimexValue> parse_absolute(std::string_view text, const RuleTables& rules = default_rules());

// True iff the span matches a fully specified absolute pattern and the date is valid.
bool is_absolute(std::string_view text, const RuleTables& rules = default_rules());

ParsedSpan parse_span(std::string_view text, const RuleTables& rules = default_rules());

}  // namespace rinorm
