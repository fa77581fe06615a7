#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/classifier.hpp"
#include "rinorm/document.hpp"
#include "rinorm/pipeline.hpp"

namespace rinorm {

enum class MatchMode { Strict, Relaxed };
std::string_view to_string(MatchMode mode) noexcept;
MatchMode parse_match_mode(std::string_view name);

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;

  // nullopt when total is 0 (reported as n/a).
  std::optional<double> fraction() const;
  void add(bool ok) {
    ++total;
    correct += ok;
  }
  friend bool operator==(const Tally&, const Tally&) = default;
};

// Strict: exact value equality. Relaxed: also within one day when the gold
// span is a post-event ordinal.
bool value_matches(const TimexValue& predicted, const TimexValue& gold, SpanFamily gold_family, MatchMode mode);

struct MentionScore {
  std::string document_id;
  std::string mention_id;
  bool anchor_point_correct = false;
  bool relation_correct = false;
  bool value_correct = false;
};

// Each step is conditioned on the previous ones:
//   extraction      gold RI-TIMEXes with a prediction (recall)
//   anchor point    over extracted; correct when the label is in the gold set
//   anchor relation over anchor-correct mentions
//   normalization   over relation-correct mentions
//   value accuracy  correct values over extracted; value recall over all gold
struct EvalReport {
  MatchMode mode = MatchMode::Strict;
  Tally extraction;
  Tally anchor_point;
  std::array<Tally, 4> anchor_point_by_label;  // by gold label, kAnchorPointLabels order
  Tally anchor_relation;
  std::array<Tally, 3> anchor_relation_by_label;  // by gold relation
  Tally normalization;
  Tally value_accuracy;
  Tally value_recall;
  std::vector<MentionScore> mentions;  // sorted by document then mention id
};

// Predictions and gold are matched by document id and mention id. Throws
// DataError for predictions naming unknown documents or mentions that are not
// gold-annotated RI-TIMEXes, and for gold documents without gold_anchors.
EvalReport score(const std::vector<DocumentPredictions>& predictions, const std::vector<Document>& gold,
                 MatchMode mode, const RuleTables& rules = default_rules());

struct AnchorStats {
  std::size_t mentions = 0;
  std::array<std::size_t, 4> anchor_points{};
  std::array<std::size_t, 3> relations{};

  std::optional<double> anchor_point_fraction(AnchorPointLabel label) const;
  std::optional<double> relation_fraction(AnchorRelation relation) const;
};

// Throws DataError when a document lacks gold_anchors.
AnchorStats anchor_stats(const std::vector<Document>& corpus);

struct AgreementReport {
  Tally anchor_point;
  Tally anchor_relation;  // over anchor-agreed mentions
};

// Anchor agreement: non-empty intersection of label sets. Throws DataError
// when the id sets differ.
AgreementReport agreement(const GoldAnchors& a, const GoldAnchors& b);

struct AblationRow {
  std::set<FeatureSet> sets;
  std::array<Tally, 4> anchor_point_by_label;
  std::array<Tally, 3> anchor_relation_by_label;
  Tally anchor_point;
  Tally anchor_relation;
};

struct AblationConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
};

// Document-level k-fold cross-validation; folds come from a seeded shuffle of
// the documents. Relation accuracy here is not conditioned on the anchor point.
std::vector<AblationRow> ablation(const std::vector<Document>& corpus, const std::vector<std::set<FeatureSet>>& sets,
                                  const FeatureConfig& base, const TrainingConfig& training,
                                  const AblationConfig& config, const RuleTables& rules = default_rules());
// Fold index of each document.
std::vector<std::size_t> assign_folds(std::size_t documents, std::size_t folds, std::uint64_t seed);

// Plain-text tables and their JSON counterparts. `header` lines (the effective
// configuration) are echoed at the top of the text form and under "config" in JSON.
std::string format_eval_report(const EvalReport& report, const std::vector<std::string>& header = {});
std::string eval_report_json(const EvalReport& report, const std::vector<std::string>& header = {});
// Strict and relaxed side by side: extraction recall, value accuracy, value recall.
std::string format_value_comparison(const EvalReport& strict, const EvalReport& relaxed,
                                    const std::vector<std::string>& header = {});
std::string format_anchor_stats(const AnchorStats& stats, const std::vector<std::string>& header = {});
std::string anchor_stats_json(const AnchorStats& stats, const std::vector<std::string>& header = {});
std::string format_ablation(const std::vector<AblationRow>& rows, const std::vector<std::string>& header = {});
std::string ablation_json(const std::vector<AblationRow>& rows, const std::vector<std::string>& header = {});

}  // namespace rinorm
