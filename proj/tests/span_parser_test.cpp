#include "rinorm/span_parser.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "rinorm/error.hpp"
#include "rinorm/text.hpp"

namespace rinorm {
namespace {

std::vector<std::pair<std::string, std::string>> fixtures() {
  std::ifstream in(RINORM_TEST_DATA_DIR "/span_fixtures.tsv");
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return rows;
}

TEST(ParseSpan, FixtureTable) {
  const auto rows = fixtures();
  ASSERT_GE(rows.size(), 26u);
  for (const auto& [span, expected] : rows) {
    EXPECT_EQ(to_string(parse_span(span)), expected) << "span: " << span;
  }
}

TEST(ParseSpan, StructuredFields) {
  const ParsedSpan next_day = parse_span("the next day");
  EXPECT_EQ(next_day.family, SpanFamily::Offset);
  EXPECT_EQ(next_day.quantity, 1);
  EXPECT_EQ(next_day.unit, TimeUnit::Day);
  EXPECT_EQ(next_day.direction_hint, DirectionHint::After);

  const ParsedSpan pod = parse_span("postoperative day two");
  EXPECT_EQ(pod.family, SpanFamily::PostEventOrdinal);
  EXPECT_EQ(pod.quantity, 2);
  EXPECT_EQ(pod.unit, TimeUnit::Day);
  EXPECT_EQ(pod.ordinal_family, "post-operative-day");

  const ParsedSpan six = parse_span("6am");
  EXPECT_EQ(six.family, SpanFamily::PartialTime);
  EXPECT_EQ(six.time_of_day, TimeOfDay(6, 0));
  EXPECT_FALSE(six.quantity.has_value());

  EXPECT_EQ(parse_span("the 29th").day_of_month, 29);
  EXPECT_EQ(parse_span("today").direction_hint, DirectionHint::None);
}

TEST(ParseSpan, UnrecognizedSpansAreUnparseable) {
  EXPECT_EQ(parse_span("").family, SpanFamily::Unparseable);
  EXPECT_EQ(parse_span("Thanksgiving").family, SpanFamily::Unparseable);
  EXPECT_EQ(parse_span("several days").family, SpanFamily::Unparseable);
  EXPECT_EQ(parse_span("the 45th").family, SpanFamily::Unparseable);
}

TEST(ParseSpan, IsDeterministic) {
  for (const auto& [span, expected] : fixtures()) {
    EXPECT_EQ(parse_span(span), parse_span(span));
  }
}

TEST(NormalizeNumbers, QuotedExamples) {
  const auto pod = normalize_numbers({"post-operative", "day", "#", "six"});
  EXPECT_EQ(pod.tokens, (std::vector<std::string>{"post-operative", "day", "NUM"}));
  EXPECT_EQ(pod.values, (std::vector<double>{6}));

  const auto second = normalize_numbers({"2nd"});
  EXPECT_EQ(second.tokens, (std::vector<std::string>{"NUM"}));
  EXPECT_EQ(second.values, (std::vector<double>{2}));

  const auto empty = normalize_numbers({});
  EXPECT_TRUE(empty.tokens.empty());
  EXPECT_TRUE(empty.values.empty());
}

TEST(NormalizeNumbers, DigitAndWordForms) {
  const auto out = normalize_numbers({"#2", "Two", "second", "23.1", "2017", "ten", "days", "thirty-first"});
  EXPECT_EQ(out.tokens, (std::vector<std::string>{"NUM", "NUM", "NUM", "NUM", "NUM", "NUM", "days", "NUM"}));
  EXPECT_EQ(out.values, (std::vector<double>{2, 2, 2, 23.1, 2017, 10, 31}));
  // "2" and "3" become the same token.
  EXPECT_EQ(normalize_numbers({"day", "#", "2"}).tokens, normalize_numbers({"day", "#", "3"}).tokens);
}

TEST(NormalizeNumbers, IdempotentOnItsOutput) {
  const std::vector<std::string> vocab = {"#", "2", "two", "second", "day", "NUM", "the", "#3",
                                          "2nd", "6am", "post-operative", "number", "twenty-one"};
  std::mt19937 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(0, 10);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> tokens(len(rng));
    for (auto& t : tokens) t = vocab[pick(rng)];
    const auto once = normalize_numbers(tokens);
    const auto twice = normalize_numbers(once.tokens);
    ASSERT_EQ(twice.tokens, once.tokens);
    ASSERT_TRUE(twice.values.empty());
  }
}

TEST(IsAbsolute, DocumentedPatterns) {
  EXPECT_TRUE(is_absolute("2017-04-26"));
  EXPECT_TRUE(is_absolute("11/29/13"));
  EXPECT_TRUE(is_absolute("11/29/2013"));
  EXPECT_TRUE(is_absolute("Nov 29, 2013"));
  EXPECT_TRUE(is_absolute("November 29 2013"));
  EXPECT_TRUE(is_absolute("2017-04-26T06:00"));
  EXPECT_TRUE(is_absolute("03-14-1998"));
  EXPECT_FALSE(is_absolute("the next day"));
  EXPECT_FALSE(is_absolute("13/45/2013"));
  EXPECT_FALSE(is_absolute("02/29/2013"));
  EXPECT_FALSE(is_absolute("April 29"));
  EXPECT_FALSE(is_absolute("6am"));
  EXPECT_FALSE(is_absolute("Smarch 3, 2013"));
}

TEST(IsAbsolute, TwoDigitYearPivot) {
  EXPECT_EQ(parse_absolute("11/29/13"), TimexValue(CalendarDate(2013, 11, 29)));
  EXPECT_EQ(parse_absolute("11/29/29"), TimexValue(CalendarDate(2029, 11, 29)));
  EXPECT_EQ(parse_absolute("11/29/30"), TimexValue(CalendarDate(1930, 11, 29)));
  EXPECT_EQ(parse_absolute("2017-04-26T06:05"),
            TimexValue(DateTime{CalendarDate(2017, 4, 26), TimeOfDay(6, 5)}));
}

TEST(IsAbsolute, RoutingIsExclusive) {
  // Anything the pipeline would route to parse_span is not absolute, and no
  // absolute form reads as a relative span.
  for (const auto& [span, expected] : fixtures()) EXPECT_FALSE(is_absolute(span)) << span;
  for (const auto* abs : {"2017-04-26", "11/29/13", "Nov 29, 2013", "2017-04-26T06:00"}) {
    EXPECT_NE(parse_span(abs).family, SpanFamily::Offset) << abs;
    EXPECT_NE(parse_span(abs).family, SpanFamily::PostEventOrdinal) << abs;
  }
}

TEST(Rules, OverridesLoadFromDirectory) {
  RuleSources sources = builtin_rule_sources();
  sources.ordinal_families += "family day-of-stay -1\ntrigger day-of-stay stay day\n";
  const RuleTables rules = parse_rules(sources);
  const ParsedSpan span = parse_span("stay day 3", rules);
  EXPECT_EQ(span.family, SpanFamily::PostEventOrdinal);
  EXPECT_EQ(span.ordinal_family, "day-of-stay");
  EXPECT_EQ(rules.family_offset("day-of-stay"), -1);
}

TEST(Rules, MalformedTablesAreRejected) {
  RuleSources sources = builtin_rule_sources();
  sources.number_words += "eleventy 111\n";
  EXPECT_THROW(parse_rules(sources), ParseError);
  sources = builtin_rule_sources();
  sources.ordinal_families += "trigger nowhere some phrase\n";
  EXPECT_THROW(parse_rules(sources), ParseError);
}

TEST(Tokenize, KeepsHyphenatedWordsAndSplitsPunctuation) {
  std::vector<std::string> texts;
  for (const auto& t : tokenize("On post-operative day #6, Hct 23.1 at 6:00 (2017-04-26).")) texts.push_back(t.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"On", "post-operative", "day", "#", "6", ",", "Hct", "23.1", "at",
                                             "6:00", "(", "2017", "-", "04", "-", "26", ")", "."}));
}

}  // namespace
}  // namespace rinorm
