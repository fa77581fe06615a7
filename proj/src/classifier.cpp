#include "rinorm/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rinorm/error.hpp"
#include "rinorm/parallel.hpp"
#include "rinorm/random.hpp"

namespace rinorm {

namespace {

constexpr std::string_view kMagic = "rinorm-anchor-models 1";

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Sparse row: (column, value) pairs, the bias column last.
using Row = std::vector<std::pair<std::size_t, double>>;

Row to_row(const FeatureVector& fv, const VocabularyIndex& vocab) {
  Row row;
  for (const auto& [name, w] : fv) {
    if (auto col = vocab.column(name)) row.emplace_back(*col, w);
  }
  row.emplace_back(vocab.size(), 1.0);
  return row;
}

void check_labels(const std::array<LinearModel, 4>& models) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (models[i].label != to_string(kAnchorPointLabels[i])) {
      throw DataError("anchor-point model " + std::to_string(i) + " is labelled \"" + models[i].label +
                      "\", expected \"" + std::string(to_string(kAnchorPointLabels[i])) + "\"");
    }
  }
}

void check_labels(const std::array<LinearModel, 3>& models) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (models[i].label != to_string(kAnchorRelations[i])) {
      throw DataError("anchor-relation model " + std::to_string(i) + " is labelled \"" + models[i].label +
                      "\", expected \"" + std::string(to_string(kAnchorRelations[i])) + "\"");
    }
  }
}

template <std::size_t N>
std::array<double, N> scores(const FeatureVector& fv, const std::array<LinearModel, N>& models) {
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = models[i].score(fv);
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : in_(std::string(text)) {}

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) fail("unexpected end of file");
    ++number_;
    return l;
  }

  // "key value" line; returns value.
  std::string field(std::string_view key) {
    const std::string l = line();
    if (l.size() <= key.size() || l.compare(0, key.size(), key) != 0 || l[key.size()] != ' ') {
      fail("expected \"" + std::string(key) + " <value>\", got \"" + l + "\"");
    }
    return l.substr(key.size() + 1);
  }

  double real(std::string_view key) { return to_real(field(key)); }

  double to_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) fail("bad number \"" + s + "\"");
    return v;
  }

  std::size_t count(std::string_view key) {
    const std::string s = field(key);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail("bad count \"" + s + "\"");
    return std::stoull(s);
  }

  bool at_end() {
    std::string rest;
    return !(in_ >> rest);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("model", "line " + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istringstream in_;
  std::size_t number_ = 0;
};

LinearModel read_model(LineReader& in, std::string_view label) {
  LinearModel m;
  m.label = in.field("model");
  if (m.label != label) in.fail("expected model \"" + std::string(label) + "\", got \"" + m.label + "\"");
  m.bias = in.real("bias");
  const std::size_t n = in.count("features");
  std::set<std::string> names;
  std::vector<std::pair<std::string, double>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string l = in.line();
    const std::size_t space = l.rfind(' ');
    if (space == std::string::npos || space == 0) in.fail("expected \"<feature> <weight>\"");
    entries.emplace_back(l.substr(0, space), in.to_real(l.substr(space + 1)));
    if (!names.insert(entries.back().first).second) in.fail("duplicate feature " + entries.back().first);
  }
  m.vocabulary = VocabularyIndex(names);
  m.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [name, w] : entries) m.weights[static_cast<Eigen::Index>(*m.vocabulary.column(name))] = w;
  return m;
}

}  // namespace

void validate(const TrainingConfig& config) {
  if (!(config.c > 0)) throw ParseError("training.c", "regularization c must be positive");
  if (config.epochs == 0) throw ParseError("training.epochs", "epochs must be positive");
  if (!(config.t0 >= 1)) throw ParseError("training.t0", "schedule offset t0 must be at least 1");
  if (!(config.positive_weight > 0)) throw ParseError("training.positive_weight", "positive_weight must be positive");
}

double LinearModel::score(const FeatureVector& fv) const {
  double s = bias;
  for (const auto& [name, w] : fv) {
    if (auto col = vocabulary.column(name)) s += weights[static_cast<Eigen::Index>(*col)] * w;
  }
  return s;
}

LinearModel train_binary(const std::vector<Instance>& instances, const TrainingConfig& config,
                         const std::string& label, std::uint64_t stream) {
  validate(config);
  std::size_t positives = 0;
  std::set<std::string> names;
  for (const auto& [fv, y] : instances) {
    positives += y;
    for (const auto& [name, w] : fv) {
      if (w != 0) names.insert(name);
    }
  }
  if (positives == 0 || positives == instances.size()) {
    throw DataError("cannot train the \"" + label + "\" classifier: no " + (positives == 0 ? "positive" : "negative") +
                    " training instances");
  }

  LinearModel model;
  model.label = label;
  model.vocabulary = VocabularyIndex(names);
  std::vector<Row> rows;
  rows.reserve(instances.size());
  for (const auto& [fv, y] : instances) rows.push_back(to_row(fv, model.vocabulary));

  const auto dim = static_cast<Eigen::Index>(model.vocabulary.size() + 1);
  const double n = static_cast<double>(instances.size());
  const double lambda = 1.0 / (config.c * n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);  // w = scale * v
  double scale = 1.0;
  Eigen::VectorXd average = Eigen::VectorXd::Zero(dim);
  std::size_t averaged = 0;

  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(config.seed, stream);
  double t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      t += 1;
      const double eta = 1.0 / (lambda * (t + config.t0));
      const double y = instances[i].second ? 1.0 : -1.0;
      double dot = 0;
      for (const auto& [col, x] : rows[i]) dot += v[static_cast<Eigen::Index>(col)] * x;
      const double margin = y * scale * dot;
      scale *= 1.0 - eta * lambda;
      if (margin < 1) {
        const double step = eta * y * (y > 0 ? config.positive_weight : 1.0) / scale;
        for (const auto& [col, x] : rows[i]) v[static_cast<Eigen::Index>(col)] += step * x;
      }
      if (scale < 1e-9) {
        v *= scale;
        scale = 1.0;
      }
    }
    if (2 * epoch >= config.epochs - 1) {
      average += scale * v;
      ++averaged;
    }
  }
  average /= static_cast<double>(averaged);
  model.weights = average.head(dim - 1);
  model.bias = average[dim - 1];
  return model;
}

AnchorPointLabel choose_anchor_point(const std::array<double, 4>& scores) {
  for (const auto label : kAnchorPointPreference) {
    if (scores[index_of(label)] > 0) return label;
  }
  return AnchorPointLabel::Admission;
}

AnchorRelation choose_anchor_relation(const std::array<double, 3>& scores) {
  AnchorRelation best = kAnchorRelationPreference[0];
  for (const auto r : kAnchorRelationPreference) {
    if (scores[index_of(r)] > scores[index_of(best)]) best = r;
  }
  return best;
}

AnchorPointLabel predict_anchor_point(const FeatureVector& fv, const std::array<LinearModel, 4>& models) {
  check_labels(models);
  return choose_anchor_point(scores(fv, models));
}

AnchorRelation predict_anchor_relation(const FeatureVector& fv, const std::array<LinearModel, 3>& models) {
  check_labels(models);
  return choose_anchor_relation(scores(fv, models));
}

AnchorDecision decide(const FeatureVector& fv, const AnchorModels& models) {
  check_labels(models.anchor_points);
  check_labels(models.relations);
  AnchorDecision d;
  d.point_scores = scores(fv, models.anchor_points);
  d.relation_scores = scores(fv, models.relations);
  d.anchor_point = choose_anchor_point(d.point_scores);
  d.relation = choose_anchor_relation(d.relation_scores);
  return d;
}

std::vector<LabelledMention> labelled_mentions(const std::vector<Document>& docs, const FeatureConfig& features,
                                               std::size_t jobs, const RuleTables& rules) {
  validate(features);
  for (const auto& doc : docs) {
    if (!doc.gold_anchors) throw DataError("document " + doc.id + ": missing gold_anchors block");
  }
  std::vector<std::vector<LabelledMention>> per_doc(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t d) {
    const Document& doc = docs[d];
    for (const auto& m : doc.timexes) {
      if (!is_ritimex(m)) continue;
      const GoldAnchor* gold = doc.gold(m.id);
      if (!gold) continue;
      per_doc[d].push_back({extract_features(doc, m, features, rules), *gold});
    }
  });
  std::vector<LabelledMention> out;
  for (auto& v : per_doc) {
    for (auto& m : v) out.push_back(std::move(m));
  }
  return out;
}

AnchorModels train_anchor_models(const std::vector<LabelledMention>& data, const FeatureConfig& features,
                                 const TrainingConfig& config, std::size_t jobs) {
  validate(features);
  validate(config);
  std::vector<FeatureVector> vectors;
  vectors.reserve(data.size());
  for (const auto& m : data) vectors.push_back(m.features);

  AnchorModels models;
  models.features = features;
  parallel_for(7, jobs, [&](std::size_t k) {
    std::vector<bool> labels(data.size());
    std::string label;
    double threshold = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      labels[i] = k < 4 ? data[i].gold.has(kAnchorPointLabels[k]) : data[i].gold.relation == kAnchorRelations[k - 4];
    }
    if (k < 4) {
      label = to_string(kAnchorPointLabels[k]);
      threshold = features.chi2_anchor_point;
    } else {
      label = to_string(kAnchorRelations[k - 4]);
      threshold = features.chi2_anchor_relation;
    }
    const std::set<std::string> selected = select_features(vectors, labels, threshold);
    std::vector<Instance> instances;
    instances.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      FeatureVector kept;
      for (const auto& [name, w] : vectors[i]) {
        if (selected.count(name)) kept.emplace_hint(kept.end(), name, w);
      }
      instances.emplace_back(std::move(kept), labels[i]);
    }
    LinearModel model = train_binary(instances, config, label, k);
    (k < 4 ? models.anchor_points[k] : models.relations[k - 4]) = std::move(model);
  });
  return models;
}

AnchorModels train_anchor_models(const std::vector<Document>& docs, const FeatureConfig& features,
                                 const TrainingConfig& config, std::size_t jobs, const RuleTables& rules) {
  return train_anchor_models(labelled_mentions(docs, features, jobs, rules), features, config, jobs);
}

std::string write_models(const AnchorModels& models) {
  const FeatureConfig& f = models.features;
  std::string out(kMagic);
  out += "\nfeature_config_hash " + hex(feature_config_hash(f));
  out += "\nwindow " + std::to_string(f.window);
  out += "\nsets " + format_feature_sets(f.sets);
  out += "\nchi2_anchor_point " + number(f.chi2_anchor_point);
  out += "\nchi2_anchor_relation " + number(f.chi2_anchor_relation);
  out += std::string("\ncross_section_previous ") + (f.cross_section_previous ? "1" : "0") + "\n";
  const auto write = [&](const LinearModel& m) {
    out += "model " + m.label + "\nbias " + number(m.bias) + "\nfeatures " + std::to_string(m.vocabulary.size()) + "\n";
    for (std::size_t i = 0; i < m.vocabulary.size(); ++i) {
      out += m.vocabulary.name(i) + " " + number(m.weights[static_cast<Eigen::Index>(i)]) + "\n";
    }
  };
  for (const auto& m : models.anchor_points) write(m);
  for (const auto& m : models.relations) write(m);
  return out;
}

AnchorModels read_models(std::string_view text, const FeatureConfig* expected) {
  LineReader in(text);
  if (in.line() != kMagic) in.fail("not a model file (expected \"" + std::string(kMagic) + "\")");
  const std::string stored_hash = in.field("feature_config_hash");
  AnchorModels models;
  FeatureConfig& f = models.features;
  f.window = in.count("window");
  try {
    f.sets = parse_feature_sets(in.field("sets"));
  } catch (const ParseError& e) {
    in.fail(e.what());
  }
  f.chi2_anchor_point = in.real("chi2_anchor_point");
  f.chi2_anchor_relation = in.real("chi2_anchor_relation");
  const std::string cross = in.field("cross_section_previous");
  if (cross != "0" && cross != "1") in.fail("cross_section_previous must be 0 or 1");
  f.cross_section_previous = cross == "1";
  if (hex(feature_config_hash(f)) != stored_hash) in.fail("feature_config_hash does not match the stored feature configuration");
  for (std::size_t i = 0; i < 4; ++i) models.anchor_points[i] = read_model(in, to_string(kAnchorPointLabels[i]));
  for (std::size_t i = 0; i < 3; ++i) models.relations[i] = read_model(in, to_string(kAnchorRelations[i]));
  if (!in.at_end()) in.fail("trailing content after the last model");
  if (expected && feature_config_hash(*expected) != feature_config_hash(f)) {
    throw DataError("model was trained with feature configuration " + stored_hash + " (" + format_feature_sets(f.sets) +
                    ", window " + std::to_string(f.window) + ") but the run uses " +
                    hex(feature_config_hash(*expected)) + " (" + format_feature_sets(expected->sets) + ", window " +
                    std::to_string(expected->window) + ")");
  }
  return models;
}

}  // namespace rinorm
