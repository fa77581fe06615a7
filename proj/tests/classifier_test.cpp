#include "rinorm/classifier.hpp"

#include <gtest/gtest.h>

#include "rinorm/error.hpp"
#include "rinorm/random.hpp"
#include "rinorm/synthetic.hpp"

namespace rinorm {
namespace {

std::vector<Instance> separable(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool y = rng.chance(0.4);
    FeatureVector fv;
    fv[y ? "cue:pos" : "cue:neg"] = 1;
    for (int k = 0; k < 5; ++k) fv["noise:" + std::to_string(rng.below(30))] = 1;
    out.emplace_back(std::move(fv), y);
  }
  return out;
}

TEST(TrainBinary, SeparableDataIsFitExactly) {
  const auto data = separable(200, 1);
  const LinearModel m = train_binary(data, TrainingConfig{}, "cue");
  for (const auto& [fv, y] : data) EXPECT_EQ(m.score(fv) > 0, y);
  EXPECT_TRUE(m.weights.allFinite());
}

TEST(TrainBinary, ConstantInputsPredictMajority) {
  for (const int positives : {3, 7}) {
    std::vector<Instance> data;
    for (int i = 0; i < 10; ++i) data.emplace_back(FeatureVector{{"x", 1}}, i < positives);
    const LinearModel m = train_binary(data, TrainingConfig{});
    // Exhaustive check over the score: the hinge objective on one distinct
    // input is minimized at +1 for a positive majority and -1 otherwise.
    const auto hinge = [&](double s) {
      double loss = 0;
      for (const auto& [fv, y] : data) loss += std::max(0.0, 1 - (y ? s : -s));
      return loss;
    };
    double best = -3;
    for (double s = -3; s <= 3; s += 0.01) {
      if (hinge(s) < hinge(best) - 1e-12) best = s;
    }
    EXPECT_EQ(m.score({{"x", 1}}) > 0, best > 0) << positives;
    EXPECT_EQ(m.score({{"x", 1}}) > 0, positives > 5);
  }
}

TEST(TrainBinary, DeterministicForSeed) {
  const auto data = separable(150, 2);
  const LinearModel a = train_binary(data, TrainingConfig{});
  const LinearModel b = train_binary(data, TrainingConfig{});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  TrainingConfig other;
  other.seed = 7;
  EXPECT_NE(train_binary(data, other).weights, a.weights);
}

TEST(TrainBinary, SingleClassNamesTheLabel) {
  std::vector<Instance> data = {{{{"x", 1}}, true}, {{{"y", 1}}, true}};
  try {
    train_binary(data, TrainingConfig{}, "discharge");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("discharge"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
  TrainingConfig bad;
  bad.c = 0;
  EXPECT_THROW(validate(bad), ParseError);
}

TEST(Decisions, AnchorPointPolicy) {
  using L = AnchorPointLabel;
  EXPECT_EQ(choose_anchor_point({-1, -1, -1, -1}), L::Admission);
  EXPECT_EQ(choose_anchor_point({-1, 2, 0.5, -1}), L::PreviousTimex);  // {Discharge, PreviousTimex}
  EXPECT_EQ(choose_anchor_point({-1, 0.1, -1, -1}), L::Discharge);
  EXPECT_EQ(choose_anchor_point({0, 0, 0, 0}), L::Admission);  // score > 0 is required
  EXPECT_EQ(choose_anchor_point({1, 1, 1, 1}), L::Admission);
  EXPECT_EQ(choose_anchor_point({-1, 1, -1, 1}), L::PreviousAbsoluteTimex);
}

TEST(Decisions, AnchorPointIsScaleInvariant) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 4> s{};
    for (auto& x : s) x = rng.unit() * 4 - 2;
    const double k = 0.01 + rng.unit() * 100;
    std::array<double, 4> scaled = s;
    for (auto& x : scaled) x *= k;
    EXPECT_EQ(choose_anchor_point(s), choose_anchor_point(scaled));
  }
}

TEST(Decisions, RelationArgmaxAndTies) {
  using R = AnchorRelation;
  EXPECT_EQ(choose_anchor_relation({-2, 1, -1}), R::After);
  EXPECT_EQ(choose_anchor_relation({-2, 1, 1}), R::After);
  EXPECT_EQ(choose_anchor_relation({1, -1, 1}), R::EqualDuring);
  EXPECT_EQ(choose_anchor_relation({0, 0, 0}), R::After);
  EXPECT_EQ(choose_anchor_relation({3, 1, 2}), R::Before);
}

TEST(Decisions, MislabelledModelsAreRejected) {
  std::array<LinearModel, 4> models;
  EXPECT_THROW(predict_anchor_point({}, models), DataError);
  for (std::size_t i = 0; i < 4; ++i) models[i].label = to_string(kAnchorPointLabels[i]);
  EXPECT_EQ(predict_anchor_point({{"x", 1}}, models), AnchorPointLabel::Admission);
}

class SyntheticModels : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SyntheticConfig sc;
    docs_ = new std::vector<Document>(generate_synthetic(sc));
    train_ = new std::vector<Document>(docs_->begin(), docs_->begin() + 160);
    models_ = new AnchorModels(train_anchor_models(*train_, FeatureConfig{}, TrainingConfig{}, 2));
  }
  static void TearDownTestSuite() {
    delete docs_;
    delete train_;
    delete models_;
  }
  static std::vector<Document>* docs_;
  static std::vector<Document>* train_;
  static AnchorModels* models_;
};
std::vector<Document>* SyntheticModels::docs_ = nullptr;
std::vector<Document>* SyntheticModels::train_ = nullptr;
AnchorModels* SyntheticModels::models_ = nullptr;

TEST_F(SyntheticModels, HeldOutAccuracy) {
  const std::vector<Document> test(docs_->begin() + 160, docs_->end());
  const auto data = labelled_mentions(test, FeatureConfig{});
  double points = 0, relations = 0;
  for (const auto& m : data) {
    const AnchorDecision d = decide(m.features, *models_);
    points += m.gold.has(d.anchor_point);
    relations += d.relation == m.gold.relation;
  }
  ASSERT_GT(data.size(), 300u);
  EXPECT_GE(points / data.size(), 0.95);
  EXPECT_GE(relations / data.size(), 0.95);
}

TEST_F(SyntheticModels, FileRoundTripAndHashCheck) {
  const std::string text = write_models(*models_);
  const AnchorModels back = read_models(text);
  EXPECT_EQ(write_models(back), text);
  FeatureConfig same;
  EXPECT_NO_THROW(read_models(text, &same));
  FeatureConfig other;
  other.window = 4;
  EXPECT_THROW(read_models(text, &other), DataError);
  EXPECT_THROW(read_models("garbage\n"), ParseError);
  EXPECT_THROW(read_models(text.substr(0, text.size() / 2)), ParseError);
  std::string tampered = text;
  tampered.replace(tampered.find("window 8"), 8, "window 9");
  EXPECT_THROW(read_models(tampered), ParseError);
}

TEST_F(SyntheticModels, TrainingIsDeterministicAcrossJobCounts) {
  const AnchorModels again = train_anchor_models(*train_, FeatureConfig{}, TrainingConfig{}, 1);
  EXPECT_EQ(write_models(again), write_models(*models_));
}

TEST(TrainAnchorModels, MissingGoldBlockIsADataError) {
  SyntheticConfig sc;
  sc.documents = 2;
  auto docs = generate_synthetic(sc);
  docs[1].gold_anchors.reset();
  try {
    train_anchor_models(docs, FeatureConfig{}, TrainingConfig{});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("gold_anchors"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(docs[1].id), std::string::npos);
  }
}

}  // namespace
}  // namespace rinorm
