#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rinorm/document.hpp"
#include "rinorm/features.hpp"

namespace rinorm {

// Hinge-loss SVM trained by stochastic subgradient descent (Pegasos schedule):
// lambda = 1 / (c * n), step 1 / (lambda * (t + t0)). The returned weights are
// the average of the epoch-end iterates over the second half of training.
struct TrainingConfig {
  double c = 1.0;
  std::size_t epochs = 50;
  double t0 = 2.0;
  // Loss multiplier for positive instances.
  double positive_weight = 1.0;
  std::uint64_t seed = 42;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

// Throws ParseError naming the offending field.
void validate(const TrainingConfig& config);

struct LinearModel {
  std::string label;
  VocabularyIndex vocabulary;
  Eigen::VectorXd weights;
  double bias = 0;

  // Features outside the vocabulary are ignored.
  double score(const FeatureVector& fv) const;
};

using Instance = std::pair<FeatureVector, bool>;

// Vocabulary is every feature seen in `instances`. Throws DataError naming
// `label` when either class is empty.
LinearModel train_binary(const std::vector<Instance>& instances, const TrainingConfig& config,
                         const std::string& label = "model", std::uint64_t stream = 0);

struct AnchorModels {
  FeatureConfig features;
  std::array<LinearModel, 4> anchor_points;  // kAnchorPointLabels order
  std::array<LinearModel, 3> relations;      // kAnchorRelations order
};

struct AnchorDecision {
  AnchorPointLabel anchor_point = AnchorPointLabel::Admission;
  AnchorRelation relation = AnchorRelation::After;
  std::array<double, 4> point_scores{};
  std::array<double, 3> relation_scores{};

  friend bool operator==(const AnchorDecision&, const AnchorDecision&) = default;
};

// score > 0 fires a model; none → Admission; several → kAnchorPointPreference order.
AnchorPointLabel choose_anchor_point(const std::array<double, 4>& scores);
// Highest score; ties broken by kAnchorRelationPreference.
AnchorRelation choose_anchor_relation(const std::array<double, 3>& scores);

// Throw DataError if the models are not labelled in kAnchorPointLabels /
// kAnchorRelations order.
AnchorPointLabel predict_anchor_point(const FeatureVector& fv, const std::array<LinearModel, 4>& models);
AnchorRelation predict_anchor_relation(const FeatureVector& fv, const std::array<LinearModel, 3>& models);
AnchorDecision decide(const FeatureVector& fv, const AnchorModels& models);

// One instance per gold-annotated RI-TIMEX, in corpus order.
struct LabelledMention {
  FeatureVector features;
  GoldAnchor gold;
};
// Throws DataError when a document lacks its gold_anchors block.
std::vector<LabelledMention> labelled_mentions(const std::vector<Document>& docs, const FeatureConfig& features,
                                               std::size_t jobs = 1, const RuleTables& rules = default_rules());

// Chi-square selection per model (anchor-point or relation threshold), then
// one binary model per label. Models train in parallel, each on its own seed stream.
AnchorModels train_anchor_models(const std::vector<LabelledMention>& data, const FeatureConfig& features,
                                 const TrainingConfig& config, std::size_t jobs = 1);
AnchorModels train_anchor_models(const std::vector<Document>& docs, const FeatureConfig& features,
                                 const TrainingConfig& config, std::size_t jobs = 1,
                                 const RuleTables& rules = default_rules());

// Versioned text container. Weights are written with round-trip precision.
std::string write_models(const AnchorModels& models);
// Throws ParseError on malformed input, DataError when `expected` is given and
// its feature_config_hash differs from the stored one.
AnchorModels read_models(std::string_view text, const FeatureConfig* expected = nullptr);

}  // namespace rinorm
