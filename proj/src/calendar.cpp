#include "rinorm/calendar.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "rinorm/error.hpp"

namespace rinorm {

namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
std::int64_t days_from_civil(std::int64_t y, int m, int d) noexcept {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

const std::int64_t kMinDayNumber = days_from_civil(kMinYear, 1, 1);
const std::int64_t kMaxDayNumber = days_from_civil(kMaxYear, 12, 31);

}  // namespace

bool CalendarDate::valid(int year, int month, int day) noexcept {
  return year >= kMinYear && year <= kMaxYear && month >= 1 && month <= 12 && day >= 1 &&
         day <= days_in_month(year, month);
}

CalendarDate::CalendarDate(int year, int month, int day) : year_(year), month_(month), day_(day) {
  if (!valid(year, month, day)) {
    throw RangeError("invalid calendar date " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
}

std::optional<CalendarDate> CalendarDate::make(int year, int month, int day) noexcept {
  if (!valid(year, month, day)) return std::nullopt;
  return CalendarDate(Unchecked{}, year, month, day);
}

TimeOfDay::TimeOfDay(int hour, int minute) : hour_(hour), minute_(minute) {
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw RangeError("invalid time of day " + std::to_string(hour) + ":" + std::to_string(minute));
  }
}

std::optional<TimeOfDay> TimeOfDay::make(int hour, int minute) noexcept {
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) return std::nullopt;
  return TimeOfDay(hour, minute);
}

std::int64_t to_day_number(const CalendarDate& date) noexcept {
  return days_from_civil(date.year(), date.month(), date.day());
}

CalendarDate from_day_number(std::int64_t z) {
  if (z < kMinDayNumber || z > kMaxDayNumber) {
    throw RangeError("day number " + std::to_string(z) + " outside years " +
                     std::to_string(kMinYear) + "-" + std::to_string(kMaxYear));
  }
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const int y = static_cast<int>(yoe + era * 400 + (m <= 2));
  return CalendarDate(CalendarDate::Unchecked{}, y, m, d);
}

CalendarDate add_days(const CalendarDate& date, std::int64_t days) {
  const std::int64_t base = to_day_number(date);
  if ((days > 0 && days > kMaxDayNumber - base) || (days < 0 && days < kMinDayNumber - base)) {
    throw RangeError("adding " + std::to_string(days) + " days leaves the supported year range");
  }
  return from_day_number(base + days);
}

CalendarDate add_units(const CalendarDate& date, std::int64_t quantity, TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Day:
      return add_days(date, quantity);
    case TimeUnit::Week:
      if (quantity > INT64_MAX / 7 || quantity < INT64_MIN / 7) {
        throw RangeError("week offset overflow");
      }
      return add_days(date, quantity * 7);
    case TimeUnit::Month:
    case TimeUnit::Year: {
      const std::int64_t months = unit == TimeUnit::Year ? quantity * 12 : quantity;
      if ((unit == TimeUnit::Year && (quantity > 20000 || quantity < -20000)) ||
          months > 200000 || months < -200000) {
        throw RangeError("month offset overflow");
      }
      const std::int64_t index = std::int64_t{date.year()} * 12 + (date.month() - 1) + months;
      const std::int64_t year = index >= 0 ? index / 12 : (index - 11) / 12;
      const int month = static_cast<int>(index - year * 12) + 1;
      if (year < kMinYear || year > kMaxYear) {
        throw RangeError("month arithmetic leaves the supported year range");
      }
      const int y = static_cast<int>(year);
      const int day = std::min(date.day(), days_in_month(y, month));
      return CalendarDate(y, month, day);
    }
  }
  throw RangeError("unknown time unit");
}

std::int64_t days_between(const CalendarDate& from, const CalendarDate& to) noexcept {
  return to_day_number(to) - to_day_number(from);
}

std::string_view to_string(TimeUnit unit) noexcept {
  switch (unit) {
    case TimeUnit::Day: return "day";
    case TimeUnit::Week: return "week";
    case TimeUnit::Month: return "month";
    case TimeUnit::Year: return "year";
  }
  return "?";
}

std::optional<TimeUnit> time_unit_from_string(std::string_view name) noexcept {
  if (name == "day") return TimeUnit::Day;
  if (name == "week") return TimeUnit::Week;
  if (name == "month") return TimeUnit::Month;
  if (name == "year") return TimeUnit::Year;
  return std::nullopt;
}

}  // namespace rinorm
