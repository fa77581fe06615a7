#include "rinorm/pipeline.hpp"

#include <algorithm>

#include "json_schema.hpp"
#include "rinorm/error.hpp"

namespace rinorm {

namespace {

constexpr std::array<std::string_view, 3> kStatusNames = {"resolved", "fallback_used", "unresolved"};

// Nearest valid date with day-of-month `day` (and `month`, if given) on the
// requested side of `anchor`. Before/After step a month (a year when the month
// is fixed) until the candidate exists and lies on that side.
std::optional<CalendarDate> place_partial_date(const CalendarDate& anchor, AnchorRelation relation,
                                               std::optional<int> month, int day) {
  const TimeUnit step = month ? TimeUnit::Year : TimeUnit::Month;
  int y = anchor.year(), m = month.value_or(anchor.month());
  for (int i = 0; i <= 48; ++i) {
    const auto candidate = CalendarDate::make(y, m, day);
    const bool ok = candidate && (relation == AnchorRelation::EqualDuring ||
                                  (relation == AnchorRelation::Before ? *candidate <= anchor : *candidate >= anchor));
    if (ok) return candidate;
    if (relation == AnchorRelation::EqualDuring) return std::nullopt;
    const int dir = relation == AnchorRelation::Before ? -1 : 1;
    if (step == TimeUnit::Year) {
      y += dir;
    } else {
      m += dir;
      if (m == 0) m = 12, --y;
      if (m == 13) m = 1, ++y;
    }
    if (y < kMinYear || y > kMaxYear) return std::nullopt;
  }
  return std::nullopt;
}

TimexValue with_time(const CalendarDate& date, const std::optional<TimeOfDay>& time) {
  if (time) return DateTime{date, *time};
  return date;
}

}  // namespace

std::string_view to_string(NormalizationStatus status) noexcept {
  return kStatusNames[static_cast<std::size_t>(status)];
}

NormalizationStatus parse_normalization_status(std::string_view name) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<NormalizationStatus>(i);
  }
  throw ParseError("status", "unknown normalization status \"" + std::string(name) + "\"");
}

TimexValue compute_value(const TimexValue& anchor, AnchorRelation relation, const ParsedSpan& parsed,
                         const RuleTables& rules) {
  const auto date = date_of(anchor);
  if (!date) return Unresolved{};
  try {
    switch (parsed.family) {
      case SpanFamily::Offset: {
        if (!parsed.quantity || !parsed.unit || relation == AnchorRelation::EqualDuring) return Unresolved{};
        const std::int64_t q = relation == AnchorRelation::Before ? -*parsed.quantity : *parsed.quantity;
        return with_time(add_units(*date, q, *parsed.unit), parsed.time_of_day);
      }
      case SpanFamily::PostEventOrdinal: {
        if (!parsed.quantity || relation == AnchorRelation::Before) return Unresolved{};
        const auto offset = rules.family_offset(parsed.ordinal_family.value_or(""));
        if (!offset) return Unresolved{};
        return with_time(add_days(*date, *parsed.quantity + *offset), parsed.time_of_day);
      }
      case SpanFamily::PartialTime:
        if (!parsed.time_of_day) return Unresolved{};
        return DateTime{*date, *parsed.time_of_day};
      case SpanFamily::DeicticDay:
        if (relation != AnchorRelation::EqualDuring) return Unresolved{};
        return with_time(*date, parsed.time_of_day);
      case SpanFamily::PartialDate: {
        if (!parsed.day_of_month) return Unresolved{};  // a bare month names no single day
        const auto placed = place_partial_date(*date, relation, parsed.month, *parsed.day_of_month);
        if (!placed) return Unresolved{};
        return with_time(*placed, parsed.time_of_day);
      }
      case SpanFamily::Unparseable: break;
    }
  } catch (const RangeError&) {
  }
  return Unresolved{};
}

std::optional<AnchorDecision> oracle_decision(const Document& doc, const TimexMention& ri) {
  const GoldAnchor* gold = doc.gold(ri.id);
  if (!gold || gold->anchor_points.empty()) return std::nullopt;
  AnchorDecision d;
  for (const auto label : kAnchorPointLabels) d.point_scores[index_of(label)] = gold->has(label) ? 1 : -1;
  for (const auto r : kAnchorRelations) d.relation_scores[index_of(r)] = r == gold->relation ? 1 : -1;
  d.anchor_point = *std::find_if(kAnchorPointPreference.begin(), kAnchorPointPreference.end(),
                                 [&](AnchorPointLabel l) { return gold->has(l); });
  d.relation = gold->relation;
  return d;
}

DocumentNormalizer::DocumentNormalizer(const Document& doc, DecisionFn decide, bool cross_section_previous,
                                       const RuleTables& rules)
    : doc_(doc), decide_(std::move(decide)), cross_section_(cross_section_previous), rules_(rules) {}

std::optional<TimexValue> DocumentNormalizer::resolve_anchor_value(AnchorPointLabel label, const TimexMention& ri,
                                                                   std::string* anchor_id) {
  const TimexMention* anchor = nullptr;
  switch (label) {
    case AnchorPointLabel::Admission: anchor = &doc_.section(SectionKind::ClinicalHistory).sectime; break;
    case AnchorPointLabel::Discharge: anchor = &doc_.section(SectionKind::HospitalCourse).sectime; break;
    case AnchorPointLabel::PreviousTimex: anchor = find_previous_timex(doc_, ri, cross_section_); break;
    case AnchorPointLabel::PreviousAbsoluteTimex: anchor = find_previous_absolute(doc_, ri, cross_section_); break;
  }
  if (!anchor) return std::nullopt;
  if (anchor_id) *anchor_id = anchor->id;
  const bool sectime = label == AnchorPointLabel::Admission || label == AnchorPointLabel::Discharge;
  const TimexValue value = sectime || anchor->is_absolute ? anchor->value : normalize(*anchor).value;
  if (!is_full(value)) return std::nullopt;
  return value;
}

const NormalizationResult& DocumentNormalizer::normalize(const TimexMention& ri) {
  if (auto it = memo_.find(ri.id); it != memo_.end()) return it->second;
  if (std::find(stack_.begin(), stack_.end(), ri.id) != stack_.end()) {
    throw Error("document " + doc_.id + ": anchor resolution cycle through " + ri.id);
  }
  stack_.push_back(ri.id);

  NormalizationResult r;
  r.mention_id = ri.id;
  r.parsed = parse_span(ri.text, rules_);
  r.value = Unresolved{};
  const auto decision = decide_(doc_, ri);
  if (!decision) {
    r.note = "no anchor decision for this mention";
  } else {
    r.decision = *decision;
    if (r.parsed.family == SpanFamily::Unparseable) {
      r.note = "span is not parseable";
    } else {
      auto anchor = resolve_anchor_value(decision->anchor_point, ri, &r.anchor_id);
      bool fallback = false;
      if (!anchor) {
        r.note = "no usable " + std::string(to_string(decision->anchor_point)) + " anchor; used admission";
        r.anchor_id.clear();
        anchor = resolve_anchor_value(AnchorPointLabel::Admission, ri, &r.anchor_id);
        fallback = true;
      }
      r.value = compute_value(*anchor, decision->relation, r.parsed, rules_);
      if (is_full(r.value)) {
        r.status = fallback ? NormalizationStatus::FallbackUsed : NormalizationStatus::Resolved;
      } else {
        if (!r.note.empty()) r.note += "; ";
        r.note += "relation " + std::string(to_string(decision->relation)) + " is undefined for " +
                  std::string(to_string(r.parsed.family)) + " spans";
      }
    }
  }

  stack_.pop_back();
  return memo_.emplace(ri.id, std::move(r)).first->second;
}

std::vector<NormalizationResult> normalize_document(const Document& doc, const AnchorModels* models,
                                                    const PipelineConfig& config, const RuleTables& rules) {
  DecisionFn decide;
  if (config.oracle_mode) {
    decide = oracle_decision;
  } else {
    if (!models) throw Error("normalize_document: models are required unless oracle mode is on");
    decide = [models, &rules](const Document& d, const TimexMention& m) -> std::optional<AnchorDecision> {
      return rinorm::decide(extract_features(d, m, models->features, rules), *models);
    };
  }
  DocumentNormalizer normalizer(doc, std::move(decide), config.cross_section_previous, rules);
  std::vector<NormalizationResult> out;
  for (const auto& m : doc.timexes) {
    if (is_ritimex(m)) out.push_back(normalizer.normalize(m));
  }
  return out;
}

std::string write_predictions(const DocumentPredictions& predictions) {
  json::Json rows = json::Json::array();
  for (const auto& r : predictions.results) {
    json::Json row;
    row["id"] = r.mention_id;
    row["anchor_point"] = to_string(r.decision.anchor_point);
    row["anchor_relation"] = to_string(r.decision.relation);
    row["anchor_id"] = r.anchor_id;
    row["family"] = to_string(r.parsed.family);
    row["value"] = is_full(r.value) ? json::Json(format_iso8601(r.value)) : json::Json(nullptr);
    row["status"] = to_string(r.status);
    row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  json::Json j;
  j["document_id"] = predictions.document_id;
  j["predictions"] = std::move(rows);
  return json::dump(j);
}

DocumentPredictions read_predictions(std::string_view bytes) {
  const json::Json j = json::parse(bytes, "predictions");
  const json::Reader root(j, "");
  root.expect_object();
  root.only_keys({"document_id", "predictions"});
  DocumentPredictions out;
  out.document_id = root.at("document_id").string();
  const json::Reader rows = root.at("predictions");
  for (std::size_t i = 0; i < rows.array_size(); ++i) {
    const json::Reader row = rows.at(i);
    row.expect_object();
    row.only_keys({"id", "anchor_point", "anchor_relation", "anchor_id", "family", "value", "status", "note"});
    NormalizationResult r;
    try {
      r.mention_id = row.at("id").string();
      r.decision.anchor_point = parse_anchor_point(row.at("anchor_point").string());
      r.decision.relation = parse_anchor_relation(row.at("anchor_relation").string());
      r.anchor_id = row.at("anchor_id").string();
      r.parsed.family = parse_span_family(row.at("family").string());
      r.status = parse_normalization_status(row.at("status").string());
      r.note = row.at("note").string();
      const json::Reader value = row.at("value");
      r.value = value.is_null() ? TimexValue{Unresolved{}} : parse_iso8601(value.string());
    } catch (const ParseError& e) {
      row.fail(e.what());
    }
    if (r.status != NormalizationStatus::Unresolved && !is_full(r.value)) {
      row.fail("status " + std::string(to_string(r.status)) + " requires a full date value");
    }
    out.results.push_back(std::move(r));
  }
  return out;
}

}  // namespace rinorm
