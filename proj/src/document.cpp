#include "rinorm/document.hpp"

#include <algorithm>
#include <set>

#include "rinorm/error.hpp"

namespace rinorm {

namespace {

constexpr std::array<std::string_view, 6> kEventNames = {"PROBLEM",       "TREATMENT",  "TEST",
                                                         "CLINICAL_DEPT", "OCCURRENCE", "EVIDENTIAL"};

[[noreturn]] void fail(const Document& doc, std::string_view element, const std::string& message) {
  std::string where = "document " + doc.id;
  if (!element.empty()) where += ", element " + std::string(element);
  throw DataError(where + ": " + message);
}

void check_span(const Document& doc, std::string_view id, std::size_t start, std::size_t end,
                const std::string& text) {
  if (start >= end) fail(doc, id, "empty or inverted span");
  if (end > doc.text.size()) fail(doc, id, "span ends past the document text");
  if (doc.text.compare(start, end - start, text) != 0) {
    fail(doc, id, "text \"" + text + "\" does not match span [" + std::to_string(start) + ", " +
                      std::to_string(end) + ")");
  }
}

}  // namespace

std::string_view to_string(EventType type) noexcept { return kEventNames[static_cast<std::size_t>(type)]; }

EventType parse_event_type(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == name) return kEventTypes[i];
  }
  throw ParseError("event type", "unknown EVENT type \"" + std::string(name) + "\"");
}

bool GoldAnchor::has(AnchorPointLabel label) const noexcept {
  return std::find(anchor_points.begin(), anchor_points.end(), label) != anchor_points.end();
}

const Section& Document::section(SectionKind kind) const {
  for (const auto& s : sections) {
    if (s.kind == kind) return s;
  }
  throw DataError("document " + id + ": missing SECTIME for section " + std::string(to_string(kind)));
}

SectionKind Document::section_at(std::size_t offset) const {
  for (const auto& s : sections) {
    if (s.kind == SectionKind::HospitalCourse && offset >= s.start) return SectionKind::HospitalCourse;
  }
  return SectionKind::ClinicalHistory;
}

std::size_t Document::timex_index(std::string_view timex_id) const {
  for (std::size_t i = 0; i < timexes.size(); ++i) {
    if (timexes[i].id == timex_id) return i;
  }
  return npos;
}

const GoldAnchor* Document::gold(std::string_view timex_id) const {
  if (!gold_anchors) return nullptr;
  const auto it = gold_anchors->find(std::string(timex_id));
  return it == gold_anchors->end() ? nullptr : &it->second;
}

bool timex_order(const TimexMention& a, const TimexMention& b) noexcept {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  return a.id < b.id;
}

void finalize(Document& doc) {
  std::sort(doc.timexes.begin(), doc.timexes.end(), timex_order);
  std::sort(doc.events.begin(), doc.events.end(), [](const EventMention& a, const EventMention& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.id < b.id;
  });
  std::sort(doc.sections.begin(), doc.sections.end(),
            [](const Section& a, const Section& b) { return a.kind < b.kind; });
  for (auto& m : doc.timexes) m.section = doc.section_at(m.start);
  for (auto& s : doc.sections) s.sectime.section = s.kind;
  if (doc.gold_anchors) {
    for (auto& [id, gold] : *doc.gold_anchors) {
      std::sort(gold.anchor_points.begin(), gold.anchor_points.end());
      gold.anchor_points.erase(std::unique(gold.anchor_points.begin(), gold.anchor_points.end()),
                               gold.anchor_points.end());
    }
  }
  doc.tokens = tokenize(doc.text);
}

void validate(const Document& doc) {
  if (doc.id.empty()) throw DataError("document without an id");
  if (doc.sections.size() != 2 || doc.sections[0].kind != SectionKind::ClinicalHistory ||
      doc.sections[1].kind != SectionKind::HospitalCourse) {
    fail(doc, "", "expected exactly one clinical_history and one hospital_course section, in that order");
  }
  const Section& history = doc.sections[0];
  const Section& course = doc.sections[1];
  if (history.start != 0 || history.end != course.start || course.end != doc.text.size() ||
      course.start > course.end) {
    fail(doc, "", "sections must partition the text");
  }
  for (const auto& s : doc.sections) {
    check_span(doc, s.sectime.id, s.sectime.start, s.sectime.end, s.sectime.text);
    if (!is_full(s.sectime.value)) fail(doc, s.sectime.id, "SECTIME value is not a full date");
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.timexes.size(); ++i) {
    const auto& m = doc.timexes[i];
    if (m.id.empty()) fail(doc, "", "TIMEX3 without an id");
    if (!ids.insert(m.id).second) fail(doc, m.id, "duplicate TIMEX3 id");
    check_span(doc, m.id, m.start, m.end, m.text);
    if (i > 0 && !timex_order(doc.timexes[i - 1], m)) fail(doc, m.id, "TIMEX3 mentions out of document order");
    if (m.is_absolute && !is_full(m.value)) fail(doc, m.id, "absolute TIMEX3 without a full date value");
    if (m.section != doc.section_at(m.start)) fail(doc, m.id, "section does not match offset");
  }
  std::set<std::string> event_ids;
  for (const auto& e : doc.events) {
    if (e.id.empty()) fail(doc, "", "EVENT without an id");
    if (!event_ids.insert(e.id).second) fail(doc, e.id, "duplicate EVENT id");
    check_span(doc, e.id, e.start, e.end, e.text);
  }
  if (doc.gold_anchors) {
    for (const auto& [id, gold] : *doc.gold_anchors) {
      const std::size_t i = doc.timex_index(id);
      if (i == Document::npos) fail(doc, id, "gold anchor for an unknown TIMEX3");
      if (!is_ritimex(doc.timexes[i])) fail(doc, id, "gold anchor on a mention that is not an RI-TIMEX");
      if (gold.anchor_points.empty()) fail(doc, id, "gold anchor without anchor points");
      if (!std::is_sorted(gold.anchor_points.begin(), gold.anchor_points.end()) ||
          std::adjacent_find(gold.anchor_points.begin(), gold.anchor_points.end()) != gold.anchor_points.end()) {
        fail(doc, id, "gold anchor points must be sorted and distinct");
      }
    }
  }
}

}  // namespace rinorm
