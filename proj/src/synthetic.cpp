#include "rinorm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "rinorm/error.hpp"
#include "rinorm/parallel.hpp"
#include "rinorm/random.hpp"

namespace rinorm {

namespace {

using L = AnchorPointLabel;

constexpr std::array<std::string_view, 10> kNumberWords = {"zero", "one", "two",   "three", "four",
                                                           "five", "six", "seven", "eight", "nine"};
constexpr std::array<std::string_view, 12> kMonthNames = {"January", "February", "March",     "April",
                                                          "May",     "June",     "July",      "August",
                                                          "September", "October", "November", "December"};

struct Clause {
  std::string_view before;
  std::string_view event;
  EventType type;
  std::string_view after;
};

const std::vector<Clause> kClauses = {
    {"the patient was ", "extubated", EventType::Occurrence, ""},
    {"", "a chest x-ray", EventType::Test, " was obtained"},
    {"he was started on ", "heparin", EventType::Treatment, ""},
    {"she developed ", "atrial fibrillation", EventType::Problem, ""},
    {"the patient was transferred to ", "the floor", EventType::ClinicalDept, ""},
    {"the family ", "reported", EventType::Evidential, " improvement"},
    {"", "his hematocrit", EventType::Test, " was noted to be 23.1"},
    {"", "Lasix", EventType::Treatment, " was given"},
    {"the patient ", "complained", EventType::Evidential, " of chest pain"},
    {"the patient is ", "ambulating", EventType::Occurrence, " without assistance"},
    {"he will ", "follow up", EventType::Occurrence, " in clinic"},
    {"", "a fever", EventType::Problem, " was noted"},
};

const std::vector<std::string_view> kProcedures = {"a coronary artery bypass graft", "an exploratory laparotomy",
                                                   "a cardiac catheterization", "a right hip replacement"};

// Sentence openers that signal the anchor; none contains a direction word.
const std::vector<std::string_view> kAdmissionCues = {"Counting from admission ,", "Relative to the admission date ,",
                                                      "Measured from admission ,"};
const std::vector<std::string_view> kDischargeCues = {"Per the discharge summary ,", "At the discharge review ,",
                                                      "Reckoned from discharge ,"};
const std::vector<std::string_view> kPreviousCues = {"At that point in the course ,", "In that setting ,",
                                                     "Continuing from there ,"};
const std::vector<std::string_view> kProcedureCues = {"Regarding the procedure ,", "In relation to the operation ,",
                                                      "Referring to that procedure ,"};
const std::vector<std::string_view> kAbsoluteOnlyCues = {"Going back to the procedure date ,"};

enum class Pattern { A, D, P, Q, PQ, APQ };

constexpr std::array<Pattern, 6> kPatterns = {Pattern::A, Pattern::D, Pattern::P, Pattern::Q, Pattern::PQ, Pattern::APQ};

std::vector<AnchorPointLabel> labels_of(Pattern p) {
  switch (p) {
    case Pattern::A: return {L::Admission};
    case Pattern::D: return {L::Discharge};
    case Pattern::P: return {L::PreviousTimex};
    case Pattern::Q: return {L::PreviousAbsoluteTimex};
    case Pattern::PQ: return {L::PreviousTimex, L::PreviousAbsoluteTimex};
    case Pattern::APQ: return {L::Admission, L::PreviousTimex, L::PreviousAbsoluteTimex};
  }
  return {};
}

std::string render_number(Rng& rng, long n) {
  if (n >= 0 && n <= 9 && rng.chance(0.5)) return std::string(kNumberWords[static_cast<std::size_t>(n)]);
  return std::to_string(n);
}

std::string ordinal_suffix(int n) {
  if (n % 100 >= 11 && n % 100 <= 13) return "th";
  switch (n % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::string two(int n) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", n);
  return buf;
}

// One of the documented absolute surface forms.
std::string render_absolute(Rng& rng, const CalendarDate& d) {
  switch (rng.below(5)) {
    case 0: return format_iso8601(d);
    case 1: return two(d.month()) + "/" + two(d.day()) + "/" + std::to_string(d.year());
    case 2: return std::to_string(d.month()) + "/" + std::to_string(d.day()) + "/" + two(d.year() % 100);
    case 3:
      return std::string(kMonthNames[static_cast<std::size_t>(d.month() - 1)]) + " " + std::to_string(d.day()) +
             ", " + std::to_string(d.year());
    default:
      return std::to_string(d.day()) + " " + std::string(kMonthNames[static_cast<std::size_t>(d.month() - 1)]) + " " +
             std::to_string(d.year());
  }
}

struct SpanDraw {
  std::string text;
  std::string preposition;  // "on ", "at " or empty
  TimexType type = TimexType::Date;
  TimexValue value;
};

SpanDraw offset_span(Rng& rng, CalendarDate anchor, int sign) {
  SpanDraw s;
  const bool after = sign > 0;
  switch (rng.weighted(std::array<double, 4>{3, 4, 1, 1})) {
    case 0:
      s.text = after ? rng.pick(std::vector<std::string>{"the next day", "the following day", "the day after"})
                     : rng.pick(std::vector<std::string>{"the day before", "the previous day", "the prior day"});
      s.value = add_days(anchor, sign);
      break;
    case 1: {
      const long q = rng.between(2, 6);
      const std::string n = render_number(rng, q);
      s.text = after ? rng.pick(std::vector<std::string>{n + " days later", n + " days after", "in " + n + " days"})
                     : rng.pick(std::vector<std::string>{n + " days before", n + " days earlier", n + " days prior",
                                                         n + " days ago"});
      s.value = add_days(anchor, sign * q);
      break;
    }
    case 2: {
      const long q = rng.between(1, 4);
      const std::string n = q == 1 ? "a" : render_number(rng, q);
      s.text = n + (q == 1 ? " week " : " weeks ") + (after ? "later" : rng.chance(0.5) ? "earlier" : "before");
      s.value = add_units(anchor, sign * q, TimeUnit::Week);
      break;
    }
    default: {
      const long q = rng.between(1, 3);
      const std::string n = q == 1 ? "a" : render_number(rng, q);
      s.text = n + (q == 1 ? " month " : " months ") + (after ? "later" : rng.chance(0.5) ? "earlier" : "prior");
      s.value = add_units(anchor, sign * q, TimeUnit::Month);
      break;
    }
  }
  return s;
}

SpanDraw ordinal_span(Rng& rng, CalendarDate anchor) {
  SpanDraw s;
  s.preposition = rng.chance(0.8) ? "on " : "by ";
  switch (rng.weighted(std::array<double, 3>{3, 1, 1})) {
    case 0: {
      const long q = rng.between(1, 9);
      const std::string n = render_number(rng, q);
      switch (rng.below(4)) {
        case 0: s.text = "postoperative day " + n; break;
        case 1: s.text = "post-operative day # " + n; break;
        case 2: s.text = "POD #" + std::to_string(q); break;
        default: s.text = "postoperative day number " + n; break;
      }
      s.value = add_days(anchor, q);
      break;
    }
    case 1: {
      const long q = rng.between(2, 9);
      s.text = "hospital day " + render_number(rng, q);
      s.value = add_days(anchor, q - 1);
      break;
    }
    default: {
      const long q = rng.between(2, 9);
      s.text = rng.chance(0.5) ? "day of life #" + std::to_string(q) : "day of life " + render_number(rng, q);
      s.value = add_days(anchor, q - 1);
      break;
    }
  }
  return s;
}

SpanDraw equal_span(Rng& rng, CalendarDate anchor) {
  SpanDraw s;
  switch (rng.weighted(std::array<double, 4>{4, 3, 1, 1})) {
    case 0:
      s.text = rng.pick(std::vector<std::string>{"that day", "the same day", "that evening", "that morning", "today"});
      s.value = anchor;
      break;
    case 1: {
      s.type = TimexType::Time;
      s.preposition = "at ";
      const int h = static_cast<int>(rng.between(1, 11));
      const bool pm = rng.chance(0.5);
      const int minute = static_cast<int>(rng.below(4)) * 15;
      const int hour = h + (pm ? 12 : 0);
      switch (rng.below(4)) {
        case 0:
          s.text = std::to_string(h) + (pm ? "pm" : "am");
          s.value = DateTime{anchor, TimeOfDay(hour, 0)};
          break;
        case 1:
          s.text = std::to_string(h) + (pm ? " p.m." : " a.m.");
          s.value = DateTime{anchor, TimeOfDay(hour, 0)};
          break;
        case 2:
          s.text = two(hour) + ":" + two(minute);
          s.value = DateTime{anchor, TimeOfDay(hour, minute)};
          break;
        default:
          s.text = "noon";
          s.value = DateTime{anchor, TimeOfDay(12, 0)};
          break;
      }
      break;
    }
    case 2:
      s.preposition = "on ";
      s.text = "the " + std::to_string(anchor.day()) + ordinal_suffix(anchor.day());
      s.value = anchor;
      break;
    default:
      s.preposition = "on ";
      s.text = rng.chance(0.5) ? "day of life #1" : "day of life one";
      s.value = anchor;
      break;
  }
  return s;
}

SpanDraw draw_span(Rng& rng, AnchorRelation relation, CalendarDate anchor) {
  switch (relation) {
    case AnchorRelation::Before: return offset_span(rng, anchor, -1);
    case AnchorRelation::After: return rng.chance(0.6) ? offset_span(rng, anchor, +1) : ordinal_span(rng, anchor);
    case AnchorRelation::EqualDuring: return equal_span(rng, anchor);
  }
  return {};
}

class Builder {
 public:
  std::string text;
  std::vector<TimexMention> timexes;
  std::vector<EventMention> events;

  void add(std::string_view s) { text += s; }

  TimexMention& timex(std::string_view surface, TimexType type, TimexValue value, bool absolute) {
    TimexMention m;
    m.id = "T" + std::to_string(timexes.size());
    m.start = text.size();
    text += surface;
    m.end = text.size();
    m.text = std::string(surface);
    m.type = type;
    m.value = std::move(value);
    m.is_absolute = absolute;
    timexes.push_back(std::move(m));
    return timexes.back();
  }

  void event(std::string_view surface, EventType type) {
    EventMention e;
    e.id = "E" + std::to_string(events.size());
    e.start = text.size();
    text += surface;
    e.end = text.size();
    e.text = std::string(surface);
    e.type = type;
    events.push_back(std::move(e));
  }

  void clause(const Clause& c) {
    add(c.before);
    event(c.event, c.type);
    add(c.after);
  }
};

bool needs_previous_ritimex(Pattern p) { return p == Pattern::P || p == Pattern::Q; }

}  // namespace

std::vector<AnchorPattern> anchor_patterns(const SyntheticConfig& config) {
  const auto [a, d, p, q] = config.anchor_marginals;
  for (double m : config.anchor_marginals) {
    if (!(m >= 0 && m <= 1)) throw DataError("synthetic config: anchor marginals must lie in [0, 1]");
  }
  // Mass carried by label overlaps: every RI-TIMEX has at least one label.
  const double overlap = a + d + p + q - 1;
  const double eps = 1e-12;
  if (overlap < -eps) throw DataError("synthetic config: anchor marginals sum below 1, some RI-TIMEXes would have no anchor");
  const double apq = std::max({0.0, overlap - p, overlap - q});
  const double pq = overlap - 2 * apq;
  const std::array<double, 6> mass = {a - apq, d, p - pq - apq, q - pq - apq, pq, apq};
  for (double m : mass) {
    if (m < -eps) throw DataError("synthetic config: anchor marginals admit no joint distribution over the label sets");
  }
  std::vector<AnchorPattern> out;
  for (std::size_t i = 0; i < kPatterns.size(); ++i) {
    out.push_back({labels_of(kPatterns[i]), std::max(0.0, mass[i])});
  }
  return out;
}

void validate(const SyntheticConfig& config) {
  if (config.min_ritimexes < 1 || config.min_ritimexes > config.max_ritimexes) {
    throw DataError("synthetic config: need 1 <= min RI-TIMEXes <= max RI-TIMEXes");
  }
  double total = 0;
  for (double r : config.relation_probabilities) {
    if (!(r >= 0 && r <= 1)) throw DataError("synthetic config: relation probabilities must lie in [0, 1]");
    total += r;
  }
  if (std::abs(total - 1) > 1e-9) throw DataError("synthetic config: relation probabilities must sum to 1");
  if (!(config.duration_rate >= 0 && config.duration_rate <= 1)) {
    throw DataError("synthetic config: duration rate must lie in [0, 1]");
  }
  const auto patterns = anchor_patterns(config);
  double hosted = 0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (!needs_previous_ritimex(kPatterns[i])) hosted += patterns[i].probability;
  }
  if (hosted <= 0) {
    throw DataError(
        "synthetic config: every RI-TIMEX would need a preceding RI-TIMEX as its only anchor, impossible for the first "
        "one in a document");
  }
}

Document generate_document(const SyntheticConfig& config, std::size_t index) {
  Rng rng(config.seed, index);
  const auto patterns = anchor_patterns(config);
  std::array<double, 6> pattern_weights{};
  for (std::size_t i = 0; i < patterns.size(); ++i) pattern_weights[i] = patterns[i].probability;

  const auto k = static_cast<std::size_t>(
      rng.between(static_cast<long>(config.min_ritimexes), static_cast<long>(config.max_ritimexes)));
  std::vector<Pattern> plan;
  std::vector<AnchorRelation> relations;
  for (std::size_t i = 0; i < k; ++i) {
    plan.push_back(kPatterns[rng.weighted(pattern_weights)]);
    relations.push_back(kAnchorRelations[rng.weighted(config.relation_probabilities)]);
  }
  // The first RI-TIMEX follows the absolute header dates, so it cannot anchor
  // to a previous RI-TIMEX alone; move a hostable item to the front.
  if (needs_previous_ritimex(plan[0])) {
    const auto host = std::find_if(plan.begin(), plan.end(), [](Pattern p) { return !needs_previous_ritimex(p); });
    if (host != plan.end()) {
      std::iter_swap(plan.begin(), host);
    } else {
      plan[0] = Pattern::A;
    }
  }

  const CalendarDate admission(static_cast<int>(rng.between(1995, 2015)), static_cast<int>(rng.between(1, 12)),
                               static_cast<int>(rng.between(1, 28)));
  const long stay = rng.between(5, 20);
  const CalendarDate discharge = add_days(admission, stay);

  Builder b;
  Document doc;
  doc.id = "synthetic-" + std::string(4 - std::min<std::size_t>(4, std::to_string(index).size()), '0') +
           std::to_string(index);
  doc.gold_anchors.emplace();

  b.add("Admission Date :\n");
  const TimexMention admission_mention = b.timex(render_absolute(rng, admission), TimexType::Date, admission, true);
  b.add("\nDischarge Date :\n");
  const TimexMention discharge_mention = b.timex(render_absolute(rng, discharge), TimexType::Date, discharge, true);
  b.add("\nHISTORY OF PRESENT ILLNESS :\nThe patient is a " + std::to_string(rng.between(40, 85)) +
        " year old man with ");
  b.event("coronary artery disease", EventType::Problem);
  b.add(" .\n");

  TimexValue last_value = discharge;
  TimexValue last_absolute = discharge;
  const std::size_t history_items = static_cast<std::size_t>(rng.between(1, std::max<long>(1, static_cast<long>(k) / 3)));
  std::size_t course_start = 0;

  for (std::size_t i = 0; i < k; ++i) {
    if (i == history_items) {
      course_start = b.text.size();
      b.add("HOSPITAL COURSE :\n");
    }
    if (rng.chance(config.duration_rate)) {
      const long q = rng.between(2, 7);
      b.add("The patient remained intubated for ");
      b.timex(render_number(rng, q) + " days", TimexType::Duration, Unresolved{}, false).raw_value =
          "P" + std::to_string(q) + "D";
      b.add(" .\n");
    }
    const Pattern pattern = plan[i];
    if (pattern == Pattern::PQ) {
      const CalendarDate when = add_days(admission, rng.between(1, stay - 1));
      b.add("The patient underwent ");
      b.event(rng.pick(kProcedures), EventType::Treatment);
      b.add(" on ");
      b.timex(render_absolute(rng, when), TimexType::Date, when, true);
      b.add(" .\n");
      last_value = last_absolute = when;
    } else if (pattern == Pattern::APQ) {
      b.add("The patient was ");
      b.event("admitted", EventType::Occurrence);
      b.add(" on ");
      b.timex(render_absolute(rng, admission), TimexType::Date, admission, true);
      b.add(" .\n");
      last_value = last_absolute = admission;
    }

    const std::vector<AnchorPointLabel> labels = labels_of(pattern);
    TimexValue anchor;
    const std::vector<std::string_view>* cues = nullptr;
    switch (pattern) {
      case Pattern::A:
      case Pattern::APQ: anchor = admission; cues = &kAdmissionCues; break;
      case Pattern::D: anchor = discharge; cues = &kDischargeCues; break;
      case Pattern::P: anchor = last_value; cues = &kPreviousCues; break;
      case Pattern::Q: anchor = last_absolute; cues = &kAbsoluteOnlyCues; break;
      case Pattern::PQ: anchor = last_value; cues = &kProcedureCues; break;
    }
    const AnchorRelation relation = relations[i];
    const SpanDraw span = draw_span(rng, relation, *date_of(anchor));
    const Clause& clause = rng.pick(kClauses);

    // The cue always sits next to the span so it stays inside the feature window.
    const std::string_view cue = rng.pick(*cues);
    std::string id;
    if (rng.chance(0.5)) {
      b.add(cue);
      b.add(" ");
      b.add(span.preposition);
      id = b.timex(span.text, span.type, span.value, false).id;
      b.add(" , ");
      b.clause(clause);
    } else {
      b.clause(clause);
      b.add(" ");
      b.add(span.preposition);
      id = b.timex(span.text, span.type, span.value, false).id;
      b.add(" , ");
      b.add(to_lower(cue.substr(0, cue.size() - 2)));
    }
    b.add(" .\n");
    doc.gold_anchors->emplace(id, GoldAnchor{labels, relation, span.value});
    last_value = span.value;
  }
  if (course_start == 0) {
    course_start = b.text.size();
    b.add("HOSPITAL COURSE :\nThe patient was discharged in stable condition .\n");
  }

  doc.text = std::move(b.text);
  doc.timexes = std::move(b.timexes);
  doc.events = std::move(b.events);
  TimexMention admission_time = admission_mention, discharge_time = discharge_mention;
  admission_time.id = "S0";
  discharge_time.id = "S1";
  doc.sections = {Section{SectionKind::ClinicalHistory, 0, course_start, admission_time},
                  Section{SectionKind::HospitalCourse, course_start, doc.text.size(), discharge_time}};
  finalize(doc);
  validate(doc);
  return doc;
}

std::vector<Document> generate_synthetic(const SyntheticConfig& config, std::size_t jobs) {
  validate(config);
  std::vector<Document> docs(config.documents);
  parallel_for(config.documents, jobs, [&](std::size_t i) { docs[i] = generate_document(config, i); });
  return docs;
}

}  // namespace rinorm
