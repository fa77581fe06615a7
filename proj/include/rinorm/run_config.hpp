#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rinorm/classifier.hpp"
#include "rinorm/evaluation.hpp"
#include "rinorm/features.hpp"
#include "rinorm/pipeline.hpp"
#include "rinorm/synthetic.hpp"

namespace rinorm {

// Everything a CLI run depends on. File form: one `key = value` per line,
// '#' starts a comment. Keys are listed in format_run_config's output.
struct RunConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path model_dir = "models";
  std::filesystem::path prediction_dir = "predictions";
  std::filesystem::path report_dir = "reports";
  std::filesystem::path rules_dir;  // empty: shipped rule tables

  // Feeds synthetic generation, training shuffles and ablation folds.
  std::uint64_t seed = 42;
  std::size_t jobs = 1;

  FeatureConfig features;
  TrainingConfig training;
  SyntheticConfig synthetic;
  PipelineConfig pipeline;
  MatchMode mode = MatchMode::Strict;
  std::size_t folds = 10;
  std::vector<std::set<FeatureSet>> ablation_sets;

  RunConfig();
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Sets one key. Throws ParseError naming the key for unknown keys and bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Throws ParseError "<source>:<line>: ..." on malformed lines.
RunConfig parse_run_config(std::string_view text, std::string_view source = "config");
std::string format_run_config(const RunConfig& config);
// format_run_config as lines, for report headers.
std::vector<std::string> run_config_lines(const RunConfig& config);

}  // namespace rinorm
