// rinorm command-line driver. Exit codes: 0 success, 1 usage error, 2 data or
// validation error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "rinorm/classifier.hpp"
#include "rinorm/corpus_io.hpp"
#include "rinorm/error.hpp"
#include "rinorm/evaluation.hpp"
#include "rinorm/parallel.hpp"
#include "rinorm/pipeline.hpp"
#include "rinorm/run_config.hpp"
#include "rinorm/span_parser.hpp"
#include "rinorm/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rinorm;

namespace {

constexpr std::string_view kModelFile = "anchor_models.txt";

void require_dir(const fs::path& dir, std::string_view what) {
  if (!fs::is_directory(dir)) throw DataError(std::string(what) + " directory " + dir.string() + " does not exist");
}

void write_report(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  write_file(dir / name, text);
}

struct Rules {
  std::optional<RuleTables> loaded;
  const RuleTables& get() const { return loaded ? *loaded : default_rules(); }
};

Rules rules_for(const RunConfig& c) {
  Rules r;
  if (!c.rules_dir.empty()) {
    require_dir(c.rules_dir, "rules");
    r.loaded = load_rules(c.rules_dir);
  }
  return r;
}

std::vector<DocumentPredictions> read_prediction_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DocumentPredictions> out;
  for (const auto& f : files) {
    try {
      out.push_back(read_predictions(read_file(f)));
    } catch (const ParseError& e) {
      throw ParseError(e.component(), f.string() + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(f.string() + ": " + e.what());
    }
  }
  return out;
}

int convert(const RunConfig& c, const fs::path& input) {
  require_dir(input, "input");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(input)) {
    if (e.is_regular_file() && e.path().extension() == ".xml") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  const Rules rules = rules_for(c);
  std::vector<Document> docs;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    try {
      Document doc = read_i2b2_xml(read_file(f), id, rules.get());
      const fs::path gold = f.parent_path() / (id + ".gold.json");
      if (fs::exists(gold)) attach_gold(doc, read_file(gold));
      docs.push_back(std::move(doc));
    } catch (const ParseError& e) {
      throw ParseError(e.component(), f.string() + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(f.string() + ": " + e.what());
    }
  }
  write_corpus(docs, c.corpus_dir);
  std::cout << "converted " << docs.size() << " documents into " << c.corpus_dir.string() << "\n";
  return 0;
}

int gen_synthetic(const RunConfig& c) {
  const auto docs = generate_synthetic(c.synthetic, c.jobs);
  write_corpus(docs, c.corpus_dir);
  std::size_t mentions = 0;
  for (const auto& d : docs) mentions += d.gold_anchors->size();
  std::cout << "wrote " << docs.size() << " documents (" << mentions << " RI-TIMEXes) to " << c.corpus_dir.string()
            << "\n";
  return 0;
}

// Training, stats and ablation need the gold block; name the file that lacks it.
std::vector<Document> read_gold_corpus(const fs::path& dir) {
  auto docs = read_corpus(dir);
  const auto files = corpus_files(dir);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].gold_anchors) {
      throw DataError(files[i].string() + ": document " + docs[i].id + " has no gold_anchors block");
    }
  }
  return docs;
}

int train(const RunConfig& c) {
  require_dir(c.corpus_dir, "corpus");
  const Rules rules = rules_for(c);
  const auto docs = read_gold_corpus(c.corpus_dir);
  const auto data = labelled_mentions(docs, c.features, c.jobs, rules.get());
  const AnchorModels models = train_anchor_models(data, c.features, c.training, c.jobs);
  fs::create_directories(c.model_dir);
  write_file(c.model_dir / kModelFile, write_models(models));
  std::cout << "trained on " << data.size() << " RI-TIMEXes from " << docs.size() << " documents\n";
  for (const auto& m : models.anchor_points) std::cout << "  " << m.label << ": " << m.vocabulary.size() << " features\n";
  for (const auto& m : models.relations) std::cout << "  " << m.label << ": " << m.vocabulary.size() << " features\n";
  std::cout << "models written to " << (c.model_dir / kModelFile).string() << "\n";
  return 0;
}

int predict(const RunConfig& c) {
  require_dir(c.corpus_dir, "corpus");
  std::optional<AnchorModels> models;
  if (!c.pipeline.oracle_mode) {
    require_dir(c.model_dir, "model");
    const fs::path file = c.model_dir / kModelFile;
    try {
      models = read_models(read_file(file), &c.features);
    } catch (const ParseError& e) {
      throw ParseError(e.component(), file.string() + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(file.string() + ": " + e.what());
    }
  }
  const Rules rules = rules_for(c);
  const auto docs = read_corpus(c.corpus_dir);
  std::vector<std::string> outputs(docs.size());
  std::vector<std::array<std::size_t, 3>> status(docs.size());
  parallel_for(docs.size(), c.jobs, [&](std::size_t i) {
    DocumentPredictions p{docs[i].id, normalize_document(docs[i], models ? &*models : nullptr, c.pipeline, rules.get())};
    for (const auto& r : p.results) ++status[i][static_cast<std::size_t>(r.status)];
    outputs[i] = write_predictions(p);
  });
  fs::create_directories(c.prediction_dir);
  std::array<std::size_t, 3> totals{};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    write_file(c.prediction_dir / (docs[i].id + ".json"), outputs[i]);
    for (std::size_t k = 0; k < 3; ++k) totals[k] += status[i][k];
  }
  std::cout << "predicted " << docs.size() << " documents: " << totals[0] << " resolved, " << totals[1]
            << " fallback, " << totals[2] << " unresolved\n";
  return 0;
}

int evaluate(const RunConfig& c) {
  require_dir(c.corpus_dir, "corpus");
  require_dir(c.prediction_dir, "prediction");
  const Rules rules = rules_for(c);
  const auto docs = read_gold_corpus(c.corpus_dir);
  const auto preds = read_prediction_dir(c.prediction_dir);
  const auto header = run_config_lines(c);
  const EvalReport strict = score(preds, docs, MatchMode::Strict, rules.get());
  const EvalReport relaxed = score(preds, docs, MatchMode::Relaxed, rules.get());
  const EvalReport& chosen = c.mode == MatchMode::Strict ? strict : relaxed;
  const std::string name = "evaluation_" + std::string(to_string(c.mode));
  const std::string text = format_eval_report(chosen, header);
  write_report(c.report_dir, name + ".txt", text);
  write_report(c.report_dir, name + ".json", eval_report_json(chosen, header));
  write_report(c.report_dir, "value_comparison.txt", format_value_comparison(strict, relaxed, header));
  std::cout << text;
  return 0;
}

int stats(const RunConfig& c) {
  require_dir(c.corpus_dir, "corpus");
  const AnchorStats s = anchor_stats(read_gold_corpus(c.corpus_dir));
  const auto header = run_config_lines(c);
  const std::string text = format_anchor_stats(s, header);
  write_report(c.report_dir, "anchor_stats.txt", text);
  write_report(c.report_dir, "anchor_stats.json", anchor_stats_json(s, header));
  std::cout << text;
  return 0;
}

int ablate(const RunConfig& c) {
  require_dir(c.corpus_dir, "corpus");
  const Rules rules = rules_for(c);
  const auto docs = read_gold_corpus(c.corpus_dir);
  const auto rows = ablation(docs, c.ablation_sets, c.features, c.training, AblationConfig{c.folds, c.seed, c.jobs},
                             rules.get());
  const auto header = run_config_lines(c);
  const std::string text = format_ablation(rows, header);
  write_report(c.report_dir, "ablation.txt", text);
  write_report(c.report_dir, "ablation.json", ablation_json(rows, header));
  std::cout << text;
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Normalize relative and incomplete temporal expressions in clinical narratives."};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Run configuration file (key = value lines)");
  app.add_option("--set", settings, "Override one configuration key: --set key=value (repeatable)");
  app.add_option("--jobs", jobs, "Worker thread cap");
  app.add_option("--seed", seed, "Seed for generation, training and folds");

  std::map<std::string, std::string> overrides;  // config key -> flag value
  const auto path_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };

  fs::path input;
  auto* convert_cmd = app.add_subcommand("convert", "Convert i2b2 XML (plus optional <id>.gold.json) to the canonical corpus");
  convert_cmd->add_option("--input", input, "Directory of i2b2 .xml files")->required();
  path_flag(convert_cmd, "--out", "corpus_dir", "Output corpus directory");

  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write a synthetic gold-annotated corpus");
  path_flag(gen_cmd, "--out", "corpus_dir", "Output corpus directory");
  path_flag(gen_cmd, "--documents", "synthetic.documents", "Number of documents");

  auto* train_cmd = app.add_subcommand("train", "Train the anchor-point and anchor-relation classifiers");
  path_flag(train_cmd, "--corpus", "corpus_dir", "Corpus directory");
  path_flag(train_cmd, "--models", "model_dir", "Model output directory");

  auto* predict_cmd = app.add_subcommand("predict", "Normalize every RI-TIMEX and write prediction files");
  path_flag(predict_cmd, "--corpus", "corpus_dir", "Corpus directory");
  path_flag(predict_cmd, "--models", "model_dir", "Model directory");
  path_flag(predict_cmd, "--out", "prediction_dir", "Prediction output directory");
  predict_cmd->add_flag_callback("--oracle", [&] { overrides["pipeline.oracle_mode"] = "true"; },
                                 "Use gold anchor decisions instead of the classifiers");

  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against the gold corpus");
  path_flag(eval_cmd, "--corpus", "corpus_dir", "Gold corpus directory");
  path_flag(eval_cmd, "--predictions", "prediction_dir", "Prediction directory");
  path_flag(eval_cmd, "--reports", "report_dir", "Report output directory");
  path_flag(eval_cmd, "--mode", "evaluation.mode", "strict or relaxed");

  auto* stats_cmd = app.add_subcommand("stats", "Anchor point and relation distribution of a gold corpus");
  path_flag(stats_cmd, "--corpus", "corpus_dir", "Gold corpus directory");
  path_flag(stats_cmd, "--reports", "report_dir", "Report output directory");

  auto* ablate_cmd = app.add_subcommand("ablate", "Cross-validated accuracy per feature-set combination");
  path_flag(ablate_cmd, "--corpus", "corpus_dir", "Gold corpus directory");
  path_flag(ablate_cmd, "--reports", "report_dir", "Report output directory");
  path_flag(ablate_cmd, "--sets", "ablation.sets", "Feature-set rows, e.g. \"A;B;B+D1+D2\"");
  path_flag(ablate_cmd, "--folds", "ablation.folds", "Number of folds");

  std::string span_text;
  auto* span_cmd = app.add_subcommand("parse-span", "Print the structured reading of one span");
  span_cmd->add_option("text", span_text, "Span text")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunConfig config = config_path.empty() ? RunConfig{} : parse_run_config(read_file(config_path), config_path);
  for (const auto& s : settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got \"" << s << "\"\n" << app.help();
      return 1;
    }
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (seed) apply_setting(config, "seed", std::to_string(*seed));
  if (jobs) apply_setting(config, "jobs", std::to_string(*jobs));
  for (const auto& [key, value] : overrides) apply_setting(config, key, value);
  validate(config.features);
  validate(config.training);

  if (*convert_cmd) return convert(config, input);
  if (*gen_cmd) return gen_synthetic(config);
  if (*train_cmd) return train(config);
  if (*predict_cmd) return predict(config);
  if (*eval_cmd) return evaluate(config);
  if (*stats_cmd) return stats(config);
  if (*ablate_cmd) return ablate(config);
  const Rules rules = rules_for(config);
  std::cout << to_string(parse_span(span_text, rules.get())) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
