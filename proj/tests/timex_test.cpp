#include "rinorm/timex.hpp"

#include <gtest/gtest.h>

#include <random>

#include "rinorm/error.hpp"

namespace rinorm {
namespace {

TEST(ParseIso8601, FullForms) {
  EXPECT_EQ(parse_iso8601("2017-04-26"), TimexValue{CalendarDate(2017, 4, 26)});
  EXPECT_EQ(parse_iso8601("2017-04-26T06:00"),
            TimexValue(DateTime{CalendarDate(2017, 4, 26), TimeOfDay(6, 0)}));
}

TEST(ParseIso8601, PartialForms) {
  EXPECT_EQ(parse_iso8601("T06:30"), TimexValue(PartialTime{TimeOfDay(6, 30)}));
  EXPECT_EQ(parse_iso8601("XXXX-XX-29"), TimexValue(PartialDate{std::nullopt, 29}));
  EXPECT_EQ(parse_iso8601("XXXX-04-29"), TimexValue(PartialDate{4, 29}));
  EXPECT_EQ(parse_iso8601("XXXX-04"), TimexValue(PartialDate{4, std::nullopt}));
}

TEST(ParseIso8601, ErrorsNameTheComponent) {
  const auto component_of = [](std::string_view text) {
    try {
      parse_iso8601(text);
    } catch (const ParseError& e) {
      return e.component();
    }
    return std::string("no error");
  };
  EXPECT_EQ(component_of("2013-13-01"), "month");
  EXPECT_EQ(component_of("2013-02-29"), "day");
  EXPECT_EQ(component_of("2013-00-10"), "month");
  EXPECT_EQ(component_of("2017-04-26T24:00"), "hour");
  EXPECT_EQ(component_of("2017-04-26T23:60"), "minute");
  EXPECT_EQ(component_of("1200-01-01"), "year");
  EXPECT_EQ(component_of("2017-4-26"), "date");
  EXPECT_EQ(component_of("P3D"), "date");
  EXPECT_EQ(component_of("2017-04-26X06:00"), "time");
  EXPECT_EQ(component_of("XXXX-XX-32"), "day");
}

TEST(FormatIso8601, CanonicalForms) {
  EXPECT_EQ(format_iso8601(CalendarDate(2017, 4, 27)), "2017-04-27");
  EXPECT_EQ(format_iso8601(DateTime{CalendarDate(2017, 4, 26), TimeOfDay(6, 0)}), "2017-04-26T06:00");
  EXPECT_EQ(format_iso8601(CalendarDate(1600, 1, 5)), "1600-01-05");
  EXPECT_THROW(format_iso8601(PartialTime{TimeOfDay(6, 0)}), Error);
  EXPECT_THROW(format_iso8601(Unresolved{}), Error);
  EXPECT_EQ(format_value(PartialTime{TimeOfDay(6, 0)}), "T06:00");
  EXPECT_EQ(format_value(PartialDate{std::nullopt, 9}), "XXXX-XX-09");
}

TEST(FormatIso8601, RoundTripsRandomValues) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> year(kMinYear, kMaxYear), month(1, 12), hour(0, 23), minute(0, 59);
  for (int i = 0; i < 5000; ++i) {
    const int y = year(rng), m = month(rng);
    std::uniform_int_distribution<int> day(1, days_in_month(y, m));
    const CalendarDate d(y, m, day(rng));
    const TimexValue date = d;
    const TimexValue date_time = DateTime{d, TimeOfDay(hour(rng), minute(rng))};
    ASSERT_EQ(parse_iso8601(format_iso8601(date)), date);
    ASSERT_EQ(parse_iso8601(format_iso8601(date_time)), date_time);
    ASSERT_EQ(parse_iso8601(format_value(date_time)), date_time);
  }
}

TEST(Enums, NamesRoundTrip) {
  for (auto label : kAnchorPointLabels) EXPECT_EQ(parse_anchor_point(to_string(label)), label);
  for (auto rel : kAnchorRelations) EXPECT_EQ(parse_anchor_relation(to_string(rel)), rel);
  EXPECT_EQ(parse_timex_type("FREQUENCY"), TimexType::Frequency);
  EXPECT_EQ(parse_section_kind("hospital_course"), SectionKind::HospitalCourse);
  EXPECT_THROW(parse_anchor_point("dct"), ParseError);
}

TEST(TimexMention, RiTimexClassification) {
  TimexMention m;
  m.type = TimexType::Date;
  EXPECT_TRUE(is_ritimex(m));
  m.is_absolute = true;
  EXPECT_FALSE(is_ritimex(m));
  m.is_absolute = false;
  m.type = TimexType::Duration;
  EXPECT_FALSE(is_ritimex(m));
}

}  // namespace
}  // namespace rinorm
