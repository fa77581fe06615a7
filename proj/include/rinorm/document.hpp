#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/text.hpp"
#include "rinorm/timex.hpp"

namespace rinorm {

enum class EventType { Problem, Treatment, Test, ClinicalDept, Occurrence, Evidential };

inline constexpr std::array<EventType, 6> kEventTypes = {EventType::Problem,      EventType::Treatment,
                                                         EventType::Test,         EventType::ClinicalDept,
                                                         EventType::Occurrence,   EventType::Evidential};

std::string_view to_string(EventType type) noexcept;
EventType parse_event_type(std::string_view name);

struct EventMention {
  std::string id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  EventType type = EventType::Occurrence;

  friend bool operator==(const EventMention&, const EventMention&) = default;
};

struct Section {
  SectionKind kind = SectionKind::ClinicalHistory;
  std::size_t start = 0;  // character range of the section body
  std::size_t end = 0;
  TimexMention sectime;

  friend bool operator==(const Section&, const Section&) = default;
};

// Gold anchoring of one RI-TIMEX. Several anchor points may apply when their
// values coincide; labels are kept in kAnchorPointLabels order.
struct GoldAnchor {
  std::vector<AnchorPointLabel> anchor_points;
  AnchorRelation relation = AnchorRelation::EqualDuring;
  TimexValue value;

  bool has(AnchorPointLabel label) const noexcept;
  friend bool operator==(const GoldAnchor&, const GoldAnchor&) = default;
};

using GoldAnchors = std::map<std::string, GoldAnchor>;

struct Document {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<Section> sections;  // ClinicalHistory then HospitalCourse
  std::vector<TimexMention> timexes;
  std::vector<EventMention> events;
  std::optional<GoldAnchors> gold_anchors;

  const Section& section(SectionKind kind) const;
  SectionKind section_at(std::size_t offset) const;
  // Index into timexes, or npos.
  std::size_t timex_index(std::string_view id) const;
  const GoldAnchor* gold(std::string_view timex_id) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const Document&, const Document&) = default;
};

// Start offset, then shorter span, then id.
bool timex_order(const TimexMention& a, const TimexMention& b) noexcept;

// Sorts mentions, assigns each mention its section and tokenizes the text.
// Call after building a Document by hand; validate() afterwards.
void finalize(Document& doc);

// Checks the Document invariants; throws DataError naming the document and
// offending element.
void validate(const Document& doc);

}  // namespace rinorm
