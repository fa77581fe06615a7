#include "rinorm/calendar.hpp"

#include <gtest/gtest.h>

#include <random>

#include "rinorm/error.hpp"

namespace rinorm {
namespace {

// Fliegel & Van Flandern Julian Day Number, written independently of the
// library's civil-day conversion.
long julian_day(int y, int m, int d) {
  const long a = (m - 14) / 12;
  return (1461L * (y + 4800 + a)) / 4 + (367L * (m - 2 - 12 * a)) / 12 -
         (3L * ((y + 4900 + a) / 100)) / 4 + d - 32075;
}

// Naive day stepping; slow but obviously right.
struct NaiveDate {
  int y, m, d;
};

int naive_month_length(int y, int m) {
  if (m == 2) return ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0) ? 29 : 28;
  return (m == 4 || m == 6 || m == 9 || m == 11) ? 30 : 31;
}

NaiveDate naive_step(NaiveDate x, long n) {
  while (n > 0) {
    if (++x.d > naive_month_length(x.y, x.m)) {
      x.d = 1;
      if (++x.m > 12) {
        x.m = 1;
        ++x.y;
      }
    }
    --n;
  }
  while (n < 0) {
    if (--x.d < 1) {
      if (--x.m < 1) {
        x.m = 12;
        --x.y;
      }
      x.d = naive_month_length(x.y, x.m);
    }
    ++n;
  }
  return x;
}

CalendarDate random_date(std::mt19937_64& rng, int lo_year = 1600, int hi_year = 9900) {
  std::uniform_int_distribution<int> year(lo_year, hi_year), month(1, 12);
  const int y = year(rng), m = month(rng);
  std::uniform_int_distribution<int> day(1, days_in_month(y, m));
  return CalendarDate(y, m, day(rng));
}

TEST(CalendarDate, RejectsInvalidDates) {
  EXPECT_THROW(CalendarDate(2013, 13, 1), RangeError);
  EXPECT_THROW(CalendarDate(2013, 2, 29), RangeError);
  EXPECT_THROW(CalendarDate(1582, 12, 31), RangeError);
  EXPECT_THROW(CalendarDate(10000, 1, 1), RangeError);
  EXPECT_NO_THROW(CalendarDate(2012, 2, 29));
  EXPECT_NO_THROW(CalendarDate(2000, 2, 29));
  EXPECT_FALSE(CalendarDate::make(1900, 2, 29).has_value());
}

TEST(AddDays, WorkedExamples) {
  EXPECT_EQ(add_days(CalendarDate(2017, 4, 26), 1), CalendarDate(2017, 4, 27));
  EXPECT_EQ(add_days(CalendarDate(2012, 2, 28), 1), CalendarDate(2012, 2, 29));
  // Arithmetic gives 2006-09-22; the "2007" in the published prose is a typo.
  EXPECT_EQ(julian_day(2006, 9, 22) - julian_day(2006, 9, 16), 6);
  EXPECT_EQ(add_days(CalendarDate(2006, 9, 16), 6), CalendarDate(2006, 9, 22));
}

TEST(AddDays, CenturyAndLeapBoundaries) {
  EXPECT_EQ(add_days(CalendarDate(1900, 2, 28), 1), CalendarDate(1900, 3, 1));
  EXPECT_EQ(add_days(CalendarDate(2000, 2, 28), 1), CalendarDate(2000, 2, 29));
  EXPECT_EQ(add_days(CalendarDate(1999, 12, 31), 1), CalendarDate(2000, 1, 1));
  EXPECT_EQ(add_days(CalendarDate(2100, 3, 1), -1), CalendarDate(2100, 2, 28));
}

TEST(AddDays, OverflowIsAnError) {
  EXPECT_THROW(add_days(CalendarDate(9999, 12, 31), 1), RangeError);
  EXPECT_THROW(add_days(CalendarDate(1583, 1, 1), -1), RangeError);
  EXPECT_THROW(add_days(CalendarDate(2000, 1, 1), INT64_MAX), RangeError);
  EXPECT_THROW(add_days(CalendarDate(2000, 1, 1), INT64_MIN), RangeError);
}

TEST(AddDays, AgreesWithJulianDayOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> offset(-5000, 5000);
  for (int i = 0; i < 2000; ++i) {
    const CalendarDate d = random_date(rng);
    const long n = offset(rng);
    const CalendarDate r = add_days(d, n);
    ASSERT_EQ(julian_day(r.year(), r.month(), r.day()) - julian_day(d.year(), d.month(), d.day()), n);
    const NaiveDate naive = naive_step({d.year(), d.month(), d.day()}, n);
    ASSERT_EQ(r, CalendarDate(naive.y, naive.m, naive.d));
  }
}

TEST(AddDays, RoundTripAndMonotonicity) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> offset(-5000, 5000);
  for (int i = 0; i < 10000; ++i) {
    const CalendarDate d = random_date(rng);
    const long n = offset(rng), m = offset(rng);
    ASSERT_EQ(add_days(add_days(d, n), -n), d);
    if (n < m) ASSERT_LT(add_days(d, n), add_days(d, m));
  }
}

TEST(AddUnits, WorkedExamples) {
  EXPECT_EQ(add_units(CalendarDate(2017, 4, 26), 2, TimeUnit::Week), CalendarDate(2017, 5, 10));
  EXPECT_EQ(julian_day(2017, 5, 10) - julian_day(2017, 4, 26), 14);
  EXPECT_EQ(add_units(CalendarDate(2017, 1, 31), 1, TimeUnit::Month), CalendarDate(2017, 2, 28));
  EXPECT_EQ(add_units(CalendarDate(2016, 1, 31), 1, TimeUnit::Month), CalendarDate(2016, 2, 29));
  EXPECT_EQ(add_units(CalendarDate(2017, 3, 31), -1, TimeUnit::Month), CalendarDate(2017, 2, 28));
  EXPECT_EQ(add_units(CalendarDate(2016, 2, 29), 1, TimeUnit::Year), CalendarDate(2017, 2, 28));
  EXPECT_EQ(add_units(CalendarDate(2017, 12, 15), 1, TimeUnit::Month), CalendarDate(2018, 1, 15));
  EXPECT_EQ(add_units(CalendarDate(2017, 1, 15), -1, TimeUnit::Month), CalendarDate(2016, 12, 15));
  const CalendarDate d(2017, 8, 31);
  EXPECT_EQ(add_units(d, 0, TimeUnit::Month), d);
  EXPECT_EQ(add_units(d, 0, TimeUnit::Year), d);
}

TEST(AddUnits, MonthClampingMatchesEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> months(-40, 40);
  for (int i = 0; i < 2000; ++i) {
    const CalendarDate d = random_date(rng, 1700, 9000);
    const int q = months(rng);
    int index = d.year() * 12 + (d.month() - 1) + q;
    const int ty = index / 12, tm = index % 12 + 1;
    // Largest valid day in the target month not exceeding the original day.
    int expected_day = 0;
    for (int day = d.day(); day >= 1; --day) {
      if (CalendarDate::valid(ty, tm, day)) {
        expected_day = day;
        break;
      }
    }
    ASSERT_EQ(add_units(d, q, TimeUnit::Month), CalendarDate(ty, tm, expected_day));
  }
}

TEST(AddUnits, WeekIsSevenDays) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> weeks(-700, 700);
  for (int i = 0; i < 1000; ++i) {
    const CalendarDate d = random_date(rng);
    const long n = weeks(rng);
    ASSERT_EQ(add_units(d, n, TimeUnit::Week), add_days(d, 7 * n));
  }
}

TEST(AddUnits, OverflowIsAnError) {
  EXPECT_THROW(add_units(CalendarDate(9999, 6, 1), 1, TimeUnit::Year), RangeError);
  EXPECT_THROW(add_units(CalendarDate(1583, 1, 1), -1, TimeUnit::Month), RangeError);
  EXPECT_THROW(add_units(CalendarDate(2000, 1, 1), INT64_MAX, TimeUnit::Week), RangeError);
}

TEST(DayNumber, Inverse) {
  EXPECT_EQ(to_day_number(CalendarDate(1970, 1, 1)), 0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const CalendarDate d = random_date(rng);
    ASSERT_EQ(from_day_number(to_day_number(d)), d);
  }
  EXPECT_EQ(days_between(CalendarDate(2017, 4, 26), CalendarDate(2017, 4, 29)), 3);
}

}  // namespace
}  // namespace rinorm
