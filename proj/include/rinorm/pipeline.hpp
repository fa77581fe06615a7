#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/classifier.hpp"
#include "rinorm/document.hpp"
#include "rinorm/span_parser.hpp"

namespace rinorm {

enum class NormalizationStatus { Resolved, FallbackUsed, Unresolved };
std::string_view to_string(NormalizationStatus status) noexcept;
NormalizationStatus parse_normalization_status(std::string_view name);

struct NormalizationResult {
  std::string mention_id;
  AnchorDecision decision;
  // Id of the anchor mention, or of the SECTIME for Admission/Discharge. Empty if none.
  std::string anchor_id;
  ParsedSpan parsed;
  TimexValue value;
  NormalizationStatus status = NormalizationStatus::Unresolved;
  std::string note;  // why the value is unresolved or a fallback was taken

  friend bool operator==(const NormalizationResult&, const NormalizationResult&) = default;
};

// Anchor value + relation + parsed span -> value. `anchor` must be full.
// Combinations without a defined meaning give Unresolved.
TimexValue compute_value(const TimexValue& anchor, AnchorRelation relation, const ParsedSpan& parsed,
                         const RuleTables& rules = default_rules());

// Gold decision for oracle runs: first gold anchor point in preference order
// and the gold relation. nullopt when the mention has no gold annotation.
std::optional<AnchorDecision> oracle_decision(const Document& doc, const TimexMention& ri);

using DecisionFn = std::function<std::optional<AnchorDecision>(const Document&, const TimexMention&)>;

// Per-document resolution state: memoized results and a recursion stack.
class DocumentNormalizer {
 public:
  DocumentNormalizer(const Document& doc, DecisionFn decide, bool cross_section_previous = true,
                     const RuleTables& rules = default_rules());

  // Memoized; throws Error if resolution re-enters a mention already on the stack.
  const NormalizationResult& normalize(const TimexMention& ri);

  // Value of the anchor named by `label`, recursively normalizing RI-TIMEX
  // anchors. nullopt when the anchor mention is missing or has no full value.
  std::optional<TimexValue> resolve_anchor_value(AnchorPointLabel label, const TimexMention& ri,
                                                 std::string* anchor_id = nullptr);

 private:
  const Document& doc_;
  DecisionFn decide_;
  bool cross_section_;
  const RuleTables& rules_;
  std::map<std::string, NormalizationResult> memo_;
  std::vector<std::string> stack_;
};

struct PipelineConfig {
  // Gold anchor points and relations replace the classifiers.
  bool oracle_mode = false;
  // Anchor search for PreviousTimex/PreviousAbsoluteTimex may leave the section.
  bool cross_section_previous = true;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Results for every RI-TIMEX in document order. Without oracle mode `models`
// must be non-null.
std::vector<NormalizationResult> normalize_document(const Document& doc, const AnchorModels* models,
                                                    const PipelineConfig& config,
                                                    const RuleTables& rules = default_rules());

// Prediction block for one document (canonical JSON, 2-space indent).
struct DocumentPredictions {
  std::string document_id;
  std::vector<NormalizationResult> results;
};
std::string write_predictions(const DocumentPredictions& predictions);
// Inverse of write_predictions for the fields it stores (scores are not kept).
DocumentPredictions read_predictions(std::string_view json);

}  // namespace rinorm
