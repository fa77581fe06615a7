#include "rinorm/timex.hpp"

#include <cstdio>

#include "rinorm/error.hpp"

namespace rinorm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

int read_field(std::string_view text, std::string_view field, std::string_view component) {
  if (!all_digits(field)) {
    throw ParseError(std::string(component), "malformed " + std::string(component) + " in '" +
                                                 std::string(text) + "'");
  }
  return to_int(field);
}

[[noreturn]] void out_of_range(std::string_view text, std::string_view component, int value) {
  throw ParseError(std::string(component), std::string(component) + " out of range (" +
                                               std::to_string(value) + ") in '" +
                                               std::string(text) + "'");
}

TimeOfDay parse_time(std::string_view text, std::string_view hhmm) {
  if (hhmm.size() != 5 || hhmm[2] != ':') {
    throw ParseError("time", "malformed time in '" + std::string(text) + "'");
  }
  const int hour = read_field(text, hhmm.substr(0, 2), "hour");
  const int minute = read_field(text, hhmm.substr(3, 2), "minute");
  if (hour > 23) out_of_range(text, "hour", hour);
  if (minute > 59) out_of_range(text, "minute", minute);
  return TimeOfDay(hour, minute);
}

std::string two(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

std::string four(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04d", v);
  return buf;
}

std::string date_string(const CalendarDate& d) {
  return four(d.year()) + "-" + two(d.month()) + "-" + two(d.day());
}

std::string time_string(const TimeOfDay& t) { return two(t.hour()) + ":" + two(t.minute()); }

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::array<Enum, N>& values, std::string_view what) {
  for (Enum v : values) {
    if (to_string(v) == name) return v;
  }
  throw ParseError(std::string(what), "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

}  // namespace

bool is_full(const TimexValue& value) noexcept {
  return std::holds_alternative<CalendarDate>(value) || std::holds_alternative<DateTime>(value);
}

std::optional<CalendarDate> date_of(const TimexValue& value) noexcept {
  if (const auto* d = std::get_if<CalendarDate>(&value)) return *d;
  if (const auto* dt = std::get_if<DateTime>(&value)) return dt->date;
  return std::nullopt;
}

TimexValue parse_iso8601(std::string_view text) {
  if (text.size() == 6 && text[0] == 'T') return PartialTime{parse_time(text, text.substr(1))};

  if (text.size() < 7 || text[4] != '-') {
    throw ParseError("date", "malformed ISO 8601 value '" + std::string(text) + "'");
  }
  const std::string_view year_field = text.substr(0, 4);
  const bool partial = year_field == "XXXX";

  if (partial) {
    const std::string_view month_field = text.substr(5, 2);
    std::optional<int> month;
    if (month_field != "XX") {
      month = read_field(text, month_field, "month");
      if (*month < 1 || *month > 12) out_of_range(text, "month", *month);
    }
    if (text.size() == 7) {
      if (!month) throw ParseError("month", "partial date without fields '" + std::string(text) + "'");
      return PartialDate{month, std::nullopt};
    }
    if (text.size() != 10 || text[7] != '-') {
      throw ParseError("day", "malformed partial date '" + std::string(text) + "'");
    }
    const int day = read_field(text, text.substr(8, 2), "day");
    const int limit = month ? days_in_month(2000, *month) : 31;
    if (day < 1 || day > limit) out_of_range(text, "day", day);
    return PartialDate{month, day};
  }

  if (text.size() < 10 || text[7] != '-') {
    throw ParseError("date", "malformed ISO 8601 date '" + std::string(text) + "'");
  }
  const int year = read_field(text, year_field, "year");
  const int month = read_field(text, text.substr(5, 2), "month");
  const int day = read_field(text, text.substr(8, 2), "day");
  if (year < kMinYear || year > kMaxYear) out_of_range(text, "year", year);
  if (month < 1 || month > 12) out_of_range(text, "month", month);
  if (day < 1 || day > days_in_month(year, month)) out_of_range(text, "day", day);
  const CalendarDate date(year, month, day);

  if (text.size() == 10) return date;
  if (text[10] != 'T') {
    throw ParseError("time", "expected 'T' after date in '" + std::string(text) + "'");
  }
  return DateTime{date, parse_time(text, text.substr(11))};
}

std::string format_iso8601(const TimexValue& value) {
  if (const auto* d = std::get_if<CalendarDate>(&value)) return date_string(*d);
  if (const auto* dt = std::get_if<DateTime>(&value)) {
    return date_string(dt->date) + "T" + time_string(dt->time);
  }
  throw Error("value has no full ISO 8601 form");
}

std::string format_value(const TimexValue& value) {
  if (is_full(value)) return format_iso8601(value);
  if (const auto* pt = std::get_if<PartialTime>(&value)) return "T" + time_string(pt->time);
  if (const auto* pd = std::get_if<PartialDate>(&value)) {
    std::string out = "XXXX-" + (pd->month ? two(*pd->month) : std::string("XX"));
    if (pd->day) out += "-" + two(*pd->day);
    return out;
  }
  throw Error("unresolved value has no textual form");
}

std::string_view to_string(TimexType type) noexcept {
  switch (type) {
    case TimexType::Date: return "DATE";
    case TimexType::Time: return "TIME";
    case TimexType::Duration: return "DURATION";
    case TimexType::Frequency: return "FREQUENCY";
  }
  return "?";
}

std::string_view to_string(AnchorPointLabel label) noexcept {
  switch (label) {
    case AnchorPointLabel::Admission: return "admission";
    case AnchorPointLabel::Discharge: return "discharge";
    case AnchorPointLabel::PreviousTimex: return "previous_timex";
    case AnchorPointLabel::PreviousAbsoluteTimex: return "previous_absolute_timex";
  }
  return "?";
}

std::string_view to_string(AnchorRelation relation) noexcept {
  switch (relation) {
    case AnchorRelation::Before: return "before";
    case AnchorRelation::After: return "after";
    case AnchorRelation::EqualDuring: return "equal_during";
  }
  return "?";
}

std::string_view to_string(SectionKind kind) noexcept {
  switch (kind) {
    case SectionKind::ClinicalHistory: return "clinical_history";
    case SectionKind::HospitalCourse: return "hospital_course";
  }
  return "?";
}

TimexType parse_timex_type(std::string_view name) {
  static constexpr std::array kTypes = {TimexType::Date, TimexType::Time, TimexType::Duration,
                                        TimexType::Frequency};
  return parse_enum(name, kTypes, "timex type");
}

AnchorPointLabel parse_anchor_point(std::string_view name) {
  return parse_enum(name, kAnchorPointLabels, "anchor point");
}

AnchorRelation parse_anchor_relation(std::string_view name) {
  return parse_enum(name, kAnchorRelations, "anchor relation");
}

SectionKind parse_section_kind(std::string_view name) {
  static constexpr std::array kKinds = {SectionKind::ClinicalHistory, SectionKind::HospitalCourse};
  return parse_enum(name, kKinds, "section kind");
}

}  // namespace rinorm
