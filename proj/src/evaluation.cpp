#include "rinorm/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "json_schema.hpp"
#include "rinorm/error.hpp"
#include "rinorm/parallel.hpp"
#include "rinorm/random.hpp"

namespace rinorm {

namespace {

constexpr std::array<std::string_view, 4> kPointTitles = {"Admission date", "Discharge date", "Previous TIMEX",
                                                          "Previous absolute TIMEX"};
constexpr std::array<std::string_view, 3> kRelationTitles = {"Before", "After", "Equal/During"};

std::string percent(const std::optional<double>& f) {
  if (!f) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100 * *f);
  return buf;
}

std::string percent(const Tally& t) { return percent(t.fraction()); }

std::string counts(const Tally& t) { return "(" + std::to_string(t.correct) + "/" + std::to_string(t.total) + ")"; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string rpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string header_text(const std::vector<std::string>& header) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  return out;
}

json::Json header_json(const std::vector<std::string>& header) {
  json::Json j = json::Json::array();
  for (const auto& h : header) j.push_back(h);
  return j;
}

json::Json tally_json(const Tally& t) {
  json::Json j;
  j["correct"] = t.correct;
  j["total"] = t.total;
  const auto f = t.fraction();
  j["accuracy"] = f ? json::Json(*f) : json::Json(nullptr);
  return j;
}

}  // namespace

std::string_view to_string(MatchMode mode) noexcept { return mode == MatchMode::Strict ? "strict" : "relaxed"; }

MatchMode parse_match_mode(std::string_view name) {
  if (name == "strict") return MatchMode::Strict;
  if (name == "relaxed") return MatchMode::Relaxed;
  throw ParseError("mode", "evaluation mode must be strict or relaxed, got \"" + std::string(name) + "\"");
}

std::optional<double> Tally::fraction() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

bool value_matches(const TimexValue& predicted, const TimexValue& gold, SpanFamily gold_family, MatchMode mode) {
  if (!is_full(gold) || !is_full(predicted)) return false;
  if (predicted == gold) return true;
  if (mode == MatchMode::Strict || gold_family != SpanFamily::PostEventOrdinal) return false;
  return std::llabs(days_between(*date_of(gold), *date_of(predicted))) <= 1;
}

EvalReport score(const std::vector<DocumentPredictions>& predictions, const std::vector<Document>& gold,
                 MatchMode mode, const RuleTables& rules) {
  std::map<std::string, const Document*> docs;
  for (const auto& d : gold) {
    if (!d.gold_anchors) throw DataError("document " + d.id + ": missing gold_anchors block");
    if (!docs.emplace(d.id, &d).second) throw DataError("document " + d.id + " appears twice in the gold corpus");
  }
  // (document, mention) -> prediction
  std::map<std::pair<std::string, std::string>, const NormalizationResult*> predicted;
  for (const auto& p : predictions) {
    const auto it = docs.find(p.document_id);
    if (it == docs.end()) throw DataError("predictions for unknown document " + p.document_id);
    for (const auto& r : p.results) {
      const Document& doc = *it->second;
      const std::size_t i = doc.timex_index(r.mention_id);
      if (i == Document::npos || !is_ritimex(doc.timexes[i]) || !doc.gold(r.mention_id)) {
        throw DataError("document " + doc.id + ", mention " + r.mention_id +
                        ": prediction for a mention that is not a gold-annotated RI-TIMEX");
      }
      if (!predicted.emplace(std::pair(doc.id, r.mention_id), &r).second) {
        throw DataError("document " + doc.id + ", mention " + r.mention_id + ": duplicate prediction");
      }
    }
  }

  EvalReport report;
  report.mode = mode;
  for (const auto& [doc_id, doc] : docs) {
    std::vector<std::string> ids;
    for (const auto& [id, g] : *doc->gold_anchors) ids.push_back(id);
    for (const auto& id : ids) {
      const GoldAnchor& g = *doc->gold(id);
      const std::size_t i = doc->timex_index(id);
      if (i == Document::npos || !is_ritimex(doc->timexes[i])) continue;
      const auto it = predicted.find({doc_id, id});
      const NormalizationResult* p = it == predicted.end() ? nullptr : it->second;
      MentionScore ms{doc_id, id};
      report.extraction.add(p != nullptr);
      if (p) {
        const SpanFamily family = parse_span(doc->timexes[i].text, rules).family;
        ms.value_correct = value_matches(p->value, g.value, family, mode);
        ms.anchor_point_correct = g.has(p->decision.anchor_point);
        report.value_accuracy.add(ms.value_correct);
        report.anchor_point.add(ms.anchor_point_correct);
        for (const auto label : g.anchor_points) report.anchor_point_by_label[index_of(label)].add(ms.anchor_point_correct);
        if (ms.anchor_point_correct) {
          ms.relation_correct = p->decision.relation == g.relation;
          report.anchor_relation.add(ms.relation_correct);
          report.anchor_relation_by_label[index_of(g.relation)].add(ms.relation_correct);
          if (ms.relation_correct) report.normalization.add(ms.value_correct);
        }
      }
      report.value_recall.add(ms.value_correct);
      report.mentions.push_back(std::move(ms));
    }
  }
  return report;
}

std::optional<double> AnchorStats::anchor_point_fraction(AnchorPointLabel label) const {
  if (mentions == 0) return std::nullopt;
  return static_cast<double>(anchor_points[index_of(label)]) / static_cast<double>(mentions);
}

std::optional<double> AnchorStats::relation_fraction(AnchorRelation relation) const {
  if (mentions == 0) return std::nullopt;
  return static_cast<double>(relations[index_of(relation)]) / static_cast<double>(mentions);
}

AnchorStats anchor_stats(const std::vector<Document>& corpus) {
  AnchorStats s;
  for (const auto& doc : corpus) {
    if (!doc.gold_anchors) throw DataError("document " + doc.id + ": missing gold_anchors block");
    for (const auto& [id, g] : *doc.gold_anchors) {
      ++s.mentions;
      for (const auto label : g.anchor_points) ++s.anchor_points[index_of(label)];
      ++s.relations[index_of(g.relation)];
    }
  }
  return s;
}

AgreementReport agreement(const GoldAnchors& a, const GoldAnchors& b) {
  for (const auto& [id, g] : a) {
    if (!b.count(id)) throw DataError("mention " + id + " is annotated only in the first set");
  }
  for (const auto& [id, g] : b) {
    if (!a.count(id)) throw DataError("mention " + id + " is annotated only in the second set");
  }
  AgreementReport r;
  for (const auto& [id, ga] : a) {
    const GoldAnchor& gb = b.at(id);
    const bool agree = std::any_of(ga.anchor_points.begin(), ga.anchor_points.end(),
                                   [&](AnchorPointLabel l) { return gb.has(l); });
    r.anchor_point.add(agree);
    if (agree) r.anchor_relation.add(ga.relation == gb.relation);
  }
  return r;
}

std::vector<std::size_t> assign_folds(std::size_t documents, std::size_t folds, std::uint64_t seed) {
  std::vector<std::size_t> order(documents);
  for (std::size_t i = 0; i < documents; ++i) order[i] = i;
  Rng rng(seed, 0x666f6c6473ULL);  // "folds"
  rng.shuffle(order);
  std::vector<std::size_t> fold(documents);
  for (std::size_t i = 0; i < documents; ++i) fold[order[i]] = i % folds;
  return fold;
}

std::vector<AblationRow> ablation(const std::vector<Document>& corpus, const std::vector<std::set<FeatureSet>>& sets,
                                  const FeatureConfig& base, const TrainingConfig& training,
                                  const AblationConfig& config, const RuleTables& rules) {
  if (config.folds < 2) throw DataError("ablation needs at least 2 folds");
  if (corpus.size() < config.folds) {
    throw DataError("ablation needs at least " + std::to_string(config.folds) + " documents for " +
                    std::to_string(config.folds) + "-fold cross-validation, got " + std::to_string(corpus.size()));
  }
  for (const auto& doc : corpus) {
    if (!doc.gold_anchors) throw DataError("document " + doc.id + ": missing gold_anchors block");
  }
  const std::vector<std::size_t> fold = assign_folds(corpus.size(), config.folds, config.seed);

  std::vector<AblationRow> rows;
  for (const auto& set : sets) {
    FeatureConfig features = base;
    features.sets = set;
    validate(features);
    std::vector<std::vector<LabelledMention>> per_doc(corpus.size());
    parallel_for(corpus.size(), config.jobs, [&](std::size_t d) {
      for (const auto& m : corpus[d].timexes) {
        const GoldAnchor* g = corpus[d].gold(m.id);
        if (is_ritimex(m) && g) per_doc[d].push_back({extract_features(corpus[d], m, features, rules), *g});
      }
    });
    std::vector<std::vector<AnchorDecision>> decisions(corpus.size());
    parallel_for(config.folds, config.jobs, [&](std::size_t f) {
      std::vector<LabelledMention> train;
      for (std::size_t d = 0; d < corpus.size(); ++d) {
        if (fold[d] != f) train.insert(train.end(), per_doc[d].begin(), per_doc[d].end());
      }
      const AnchorModels models = train_anchor_models(train, features, training, 1);
      for (std::size_t d = 0; d < corpus.size(); ++d) {
        if (fold[d] != f) continue;
        for (const auto& m : per_doc[d]) decisions[d].push_back(decide(m.features, models));
      }
    });
    AblationRow row;
    row.sets = set;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      for (std::size_t k = 0; k < per_doc[d].size(); ++k) {
        const GoldAnchor& g = per_doc[d][k].gold;
        const AnchorDecision& dec = decisions[d][k];
        const bool point_ok = g.has(dec.anchor_point);
        row.anchor_point.add(point_ok);
        for (const auto label : g.anchor_points) row.anchor_point_by_label[index_of(label)].add(point_ok);
        const bool relation_ok = dec.relation == g.relation;
        row.anchor_relation.add(relation_ok);
        row.anchor_relation_by_label[index_of(g.relation)].add(relation_ok);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_eval_report(const EvalReport& r, const std::vector<std::string>& header) {
  std::string out = header_text(header);
  out += "Evaluation mode: " + std::string(to_string(r.mode)) + "\n";
  out += pad("Step", 18) + pad("Overall", 24) + pad("By type", 32) + "By type accuracy\n";
  const auto overall = [&](std::string_view step, const Tally& t, bool recall = false) {
    out += pad(std::string(step), 18) + pad(percent(t) + (recall ? "*" : "") + " " + counts(t), 24) + "\n";
  };
  const auto by_type = [&](std::string_view title, const Tally& t) {
    out += pad("", 42) + pad(std::string(title) + " (" + std::to_string(t.total) + ")", 32) + percent(t) + "\n";
  };
  overall("Extraction", r.extraction, true);
  overall("Anchor point", r.anchor_point);
  for (std::size_t i = 0; i < 4; ++i) by_type(kPointTitles[i], r.anchor_point_by_label[i]);
  overall("Anchor relation", r.anchor_relation);
  for (std::size_t i = 0; i < 3; ++i) by_type(kRelationTitles[i], r.anchor_relation_by_label[i]);
  overall("Normalization", r.normalization);
  overall("Value accuracy", r.value_accuracy);
  overall("Value recall", r.value_recall);
  out += "(* recall)\n";
  return out;
}

std::string eval_report_json(const EvalReport& r, const std::vector<std::string>& header) {
  json::Json j;
  j["config"] = header_json(header);
  j["mode"] = to_string(r.mode);
  j["extraction_recall"] = tally_json(r.extraction);
  j["anchor_point"] = tally_json(r.anchor_point);
  json::Json points;
  for (std::size_t i = 0; i < 4; ++i) points[std::string(to_string(kAnchorPointLabels[i]))] = tally_json(r.anchor_point_by_label[i]);
  j["anchor_point_by_label"] = points;
  j["anchor_relation"] = tally_json(r.anchor_relation);
  json::Json relations;
  for (std::size_t i = 0; i < 3; ++i) relations[std::string(to_string(kAnchorRelations[i]))] = tally_json(r.anchor_relation_by_label[i]);
  j["anchor_relation_by_label"] = relations;
  j["normalization"] = tally_json(r.normalization);
  j["value_accuracy"] = tally_json(r.value_accuracy);
  j["value_recall"] = tally_json(r.value_recall);
  json::Json mentions = json::Json::array();
  for (const auto& m : r.mentions) {
    json::Json row;
    row["document"] = m.document_id;
    row["mention"] = m.mention_id;
    row["anchor_point_correct"] = m.anchor_point_correct;
    row["relation_correct"] = m.relation_correct;
    row["value_correct"] = m.value_correct;
    mentions.push_back(std::move(row));
  }
  j["mentions"] = std::move(mentions);
  return json::dump(j);
}

std::string format_value_comparison(const EvalReport& strict, const EvalReport& relaxed,
                                    const std::vector<std::string>& header) {
  std::string out = header_text(header);
  out += pad("Evaluation method", 20) + rpad("Extraction recall", 19) + rpad("Value accuracy", 16) +
         rpad("Value recall", 14) + "\n";
  for (const EvalReport* r : {&strict, &relaxed}) {
    out += pad(std::string(to_string(r->mode)), 20) + rpad(percent(r->extraction), 19) +
           rpad(percent(r->value_accuracy), 16) + rpad(percent(r->value_recall), 14) + "\n";
  }
  return out;
}

std::string format_anchor_stats(const AnchorStats& s, const std::vector<std::string>& header) {
  std::string out = header_text(header);
  out += "RI-TIMEXes: " + std::to_string(s.mentions) + "\n";
  out += pad("Anchor point", 28) + rpad("Share", 9) + rpad("Count", 8) + "\n";
  for (std::size_t i = 0; i < 4; ++i) {
    out += pad(std::string(kPointTitles[i]), 28) + rpad(percent(s.anchor_point_fraction(kAnchorPointLabels[i])), 9) +
           rpad(std::to_string(s.anchor_points[i]), 8) + "\n";
  }
  out += pad("Anchor relation", 28) + rpad("Share", 9) + rpad("Count", 8) + "\n";
  for (std::size_t i = 0; i < 3; ++i) {
    out += pad(std::string(kRelationTitles[i]), 28) + rpad(percent(s.relation_fraction(kAnchorRelations[i])), 9) +
           rpad(std::to_string(s.relations[i]), 8) + "\n";
  }
  out += "(anchor points may co-occur, so their shares need not sum to 100%)\n";
  return out;
}

std::string anchor_stats_json(const AnchorStats& s, const std::vector<std::string>& header) {
  json::Json j;
  j["config"] = header_json(header);
  j["mentions"] = s.mentions;
  const auto entry = [](std::size_t count, const std::optional<double>& f) {
    json::Json e;
    e["count"] = count;
    e["fraction"] = f ? json::Json(*f) : json::Json(nullptr);
    return e;
  };
  json::Json points, relations;
  for (std::size_t i = 0; i < 4; ++i) {
    points[std::string(to_string(kAnchorPointLabels[i]))] =
        entry(s.anchor_points[i], s.anchor_point_fraction(kAnchorPointLabels[i]));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    relations[std::string(to_string(kAnchorRelations[i]))] =
        entry(s.relations[i], s.relation_fraction(kAnchorRelations[i]));
  }
  j["anchor_points"] = points;
  j["anchor_relations"] = relations;
  return json::dump(j);
}

std::string format_ablation(const std::vector<AblationRow>& rows, const std::vector<std::string>& header) {
  std::string out = header_text(header);
  constexpr std::size_t kFirst = 20, kCol = 14;
  out += pad("Feature sets", kFirst);
  std::array<std::size_t, 4> point_n{};
  std::array<std::size_t, 3> relation_n{};
  if (!rows.empty()) {
    for (std::size_t i = 0; i < 4; ++i) point_n[i] = rows[0].anchor_point_by_label[i].total;
    for (std::size_t i = 0; i < 3; ++i) relation_n[i] = rows[0].anchor_relation_by_label[i].total;
  }
  const std::array<std::string_view, 4> point_short = {"Admission", "Discharge", "Prev TIMEX", "Prev abs"};
  for (std::size_t i = 0; i < 4; ++i) {
    out += rpad(std::string(point_short[i]) + " (" + std::to_string(point_n[i]) + ")", kCol + 2);
  }
  out += rpad("Point all", kCol);
  for (const std::size_t i : {1, 0, 2}) {  // After, Before, Equal/During
    out += rpad(std::string(kRelationTitles[i]) + " (" + std::to_string(relation_n[i]) + ")", kCol + 2);
  }
  out += rpad("Relation all", kCol) + "\n";
  for (const auto& row : rows) {
    std::string name;
    for (const auto s : row.sets) name += (name.empty() ? "(" : " + (") + std::string(to_string(s)) + ")";
    out += pad(name, kFirst);
    for (std::size_t i = 0; i < 4; ++i) out += rpad(percent(row.anchor_point_by_label[i]), kCol + 2);
    out += rpad(percent(row.anchor_point), kCol);
    for (const std::size_t i : {1, 0, 2}) out += rpad(percent(row.anchor_relation_by_label[i]), kCol + 2);
    out += rpad(percent(row.anchor_relation), kCol) + "\n";
  }
  return out;
}

std::string ablation_json(const std::vector<AblationRow>& rows, const std::vector<std::string>& header) {
  json::Json j;
  j["config"] = header_json(header);
  json::Json out = json::Json::array();
  for (const auto& row : rows) {
    json::Json r;
    r["feature_sets"] = format_feature_sets(row.sets);
    json::Json points, relations;
    for (std::size_t i = 0; i < 4; ++i) points[std::string(to_string(kAnchorPointLabels[i]))] = tally_json(row.anchor_point_by_label[i]);
    for (std::size_t i = 0; i < 3; ++i) relations[std::string(to_string(kAnchorRelations[i]))] = tally_json(row.anchor_relation_by_label[i]);
    r["anchor_point"] = tally_json(row.anchor_point);
    r["anchor_point_by_label"] = points;
    r["anchor_relation"] = tally_json(row.anchor_relation);
    r["anchor_relation_by_label"] = relations;
    out.push_back(std::move(r));
  }
  j["rows"] = std::move(out);
  return json::dump(j);
}

}  // namespace rinorm
