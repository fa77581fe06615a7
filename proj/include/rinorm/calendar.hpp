#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace rinorm {

enum class TimeUnit { Day, Week, Month, Year };

inline constexpr int kMinYear = 1583;
inline constexpr int kMaxYear = 9999;

constexpr bool is_leap_year(int year) noexcept {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

constexpr int days_in_month(int year, int month) noexcept {
  constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  return month == 2 && is_leap_year(year) ? 29 : kDays[month - 1];
}

// A valid Gregorian date in [kMinYear, kMaxYear]. The
// constructor throws RangeError for anything else, so every live object is
// a real calendar day.
class CalendarDate {
 public:
  CalendarDate(int year, int month, int day);

  static std::optional<CalendarDate> make(int year, int month, int day) noexcept;
  static bool valid(int year, int month, int day) noexcept;

  int year() const noexcept { return year_; }
  int month() const noexcept { return month_; }
  int day() const noexcept { return day_; }

  friend auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
  friend bool operator==(const CalendarDate&, const CalendarDate&) = default;

 private:
  struct Unchecked {};
  constexpr CalendarDate(Unchecked, int y, int m, int d) noexcept
      : year_(y), month_(m), day_(d) {}

  friend CalendarDate from_day_number(std::int64_t);

  int year_;
  int month_;
  int day_;
};

class TimeOfDay {
 public:
  TimeOfDay(int hour, int minute);

  static std::optional<TimeOfDay> make(int hour, int minute) noexcept;

  int hour() const noexcept { return hour_; }
  int minute() const noexcept { return minute_; }

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;
  friend bool operator==(const TimeOfDay&, const TimeOfDay&) = default;

 private:
  int hour_;
  int minute_;
};

// Days since 1970-01-01.
std::int64_t to_day_number(const CalendarDate& date) noexcept;
CalendarDate from_day_number(std::int64_t days);

CalendarDate add_days(const CalendarDate& date, std::int64_t days);

// Day and week delegate to add_days; month and year move the field and clamp
// the day to the target month's length.
CalendarDate add_units(const CalendarDate& date, std::int64_t quantity, TimeUnit unit);

// Signed number of days from `from` to `to`.
std::int64_t days_between(const CalendarDate& from, const CalendarDate& to) noexcept;

std::string_view to_string(TimeUnit unit) noexcept;
std::optional<TimeUnit> time_unit_from_string(std::string_view name) noexcept;

}  // namespace rinorm
