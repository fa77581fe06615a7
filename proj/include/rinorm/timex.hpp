#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "rinorm/calendar.hpp"

namespace rinorm {

struct Unresolved {
  friend bool operator==(const Unresolved&, const Unresolved&) = default;
};

struct DateTime {
  CalendarDate date;
  TimeOfDay time;
  friend bool operator==(const DateTime&, const DateTime&) = default;
};

struct PartialTime {
  TimeOfDay time;
  friend bool operator==(const PartialTime&, const PartialTime&) = default;
};

// Day-of-month and/or month without a year. At least one is set.
struct PartialDate {
  std::optional<int> month;
  std::optional<int> day;
  friend bool operator==(const PartialDate&, const PartialDate&) = default;
};

using TimexValue = std::variant<Unresolved, CalendarDate, DateTime, PartialTime, PartialDate>;

// True for the Date and DateTime alternatives.
bool is_full(const TimexValue& value) noexcept;
// Calendar date carried by a Date or DateTime value.
std::optional<CalendarDate> date_of(const TimexValue& value) noexcept;

// Accepts YYYY-MM-DD, YYYY-MM-DDThh:mm, Thh:mm, XXXX-MM-DD, XXXX-XX-DD and
// XXXX-MM. Throws ParseError naming the offending component.
TimexValue parse_iso8601(std::string_view text);

// Canonical zero-padded form of a Date or DateTime; throws Error otherwise.
std::string format_iso8601(const TimexValue& value);

// Like format_iso8601 but also renders partial values in TIMEX3 style
// (Thh:mm, XXXX-MM-DD, XXXX-XX-DD, XXXX-MM). Throws for Unresolved.
std::string format_value(const TimexValue& value);

enum class TimexType { Date, Time, Duration, Frequency };
enum class AnchorPointLabel { Admission, Discharge, PreviousTimex, PreviousAbsoluteTimex };
enum class AnchorRelation { Before, After, EqualDuring };
enum class SectionKind { ClinicalHistory, HospitalCourse };

inline constexpr std::array<AnchorPointLabel, 4> kAnchorPointLabels = {
    AnchorPointLabel::Admission, AnchorPointLabel::Discharge, AnchorPointLabel::PreviousTimex,
    AnchorPointLabel::PreviousAbsoluteTimex};

// Conflict-resolution order for anchor points: training-set prevalence.
inline constexpr std::array<AnchorPointLabel, 4> kAnchorPointPreference = {
    AnchorPointLabel::Admission, AnchorPointLabel::PreviousTimex,
    AnchorPointLabel::PreviousAbsoluteTimex, AnchorPointLabel::Discharge};

inline constexpr std::array<AnchorRelation, 3> kAnchorRelations = {
    AnchorRelation::Before, AnchorRelation::After, AnchorRelation::EqualDuring};

// Tie-break order for anchor relations: training-set prevalence.
inline constexpr std::array<AnchorRelation, 3> kAnchorRelationPreference = {
    AnchorRelation::After, AnchorRelation::EqualDuring, AnchorRelation::Before};

constexpr std::size_t index_of(AnchorPointLabel label) noexcept { return static_cast<std::size_t>(label); }
constexpr std::size_t index_of(AnchorRelation relation) noexcept { return static_cast<std::size_t>(relation); }

std::string_view to_string(TimexType type) noexcept;
std::string_view to_string(AnchorPointLabel label) noexcept;
std::string_view to_string(AnchorRelation relation) noexcept;
std::string_view to_string(SectionKind kind) noexcept;

// Parsers for the names produced by to_string. Throw ParseError on unknown names.
TimexType parse_timex_type(std::string_view name);
AnchorPointLabel parse_anchor_point(std::string_view name);
AnchorRelation parse_anchor_relation(std::string_view name);
SectionKind parse_section_kind(std::string_view name);

struct TimexMention {
  std::string id;
  std::size_t start = 0;  // 0-based, half-open
  std::size_t end = 0;
  std::string text;
  TimexType type = TimexType::Date;
  TimexValue value;
  // Source `val` attribute kept verbatim when it is not an ISO date value
  // (durations such as P3D, frequencies).
  std::string raw_value;
  bool is_absolute = false;
  SectionKind section = SectionKind::ClinicalHistory;

  friend bool operator==(const TimexMention&, const TimexMention&) = default;
};

// DATE or TIME mention that is not absolute: the mentions this library normalizes.
inline bool is_ritimex(const TimexMention& m) noexcept {
  return !m.is_absolute && (m.type == TimexType::Date || m.type == TimexType::Time);
}

inline bool is_date_or_time(const TimexMention& m) noexcept {
  return m.type == TimexType::Date || m.type == TimexType::Time;
}

}  // namespace rinorm
