#include "rinorm/run_config.hpp"

#include <charconv>
#include <sstream>

#include "rinorm/error.hpp"
#include "rinorm/text.hpp"

namespace rinorm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string real(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string boolean(bool v) { return v ? "true" : "false"; }

[[noreturn]] void bad(std::string_view key, const std::string& message) {
  throw ParseError(std::string(key), std::string(key) + ": " + message);
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) bad(key, "expected a number, got \"" + std::string(v) + "\"");
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) {
    bad(key, "expected a non-negative integer, got \"" + std::string(v) + "\"");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, "expected true or false, got \"" + std::string(v) + "\"");
}

template <std::size_t N>
std::array<double, N> parse_reals(std::string_view key, std::string_view v) {
  std::array<double, N> out{};
  std::size_t i = 0, pos = 0;
  while (true) {
    const std::size_t comma = std::min(v.find(',', pos), v.size());
    if (i == N) bad(key, "expected " + std::to_string(N) + " comma-separated numbers");
    out[i++] = parse_real(key, trim(v.substr(pos, comma - pos)));
    if (comma == v.size()) break;
    pos = comma + 1;
  }
  if (i != N) bad(key, "expected " + std::to_string(N) + " comma-separated numbers");
  return out;
}

template <std::size_t N>
std::string reals(const std::array<double, N>& values) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) out += (i ? "," : "") + real(values[i]);
  return out;
}

std::vector<std::set<FeatureSet>> default_ablation_sets() {
  using F = FeatureSet;
  return {{F::B, F::C, F::D1, F::D2, F::D3, F::D4, F::D5, F::E},
          {F::A},
          {F::B},
          {F::B, F::C},
          {F::B, F::D1, F::D2},
          {F::B, F::D3, F::D4},
          {F::B, F::D3, F::D4, F::D5},
          {F::B, F::D1, F::D2, F::E}};
}

}  // namespace

RunConfig::RunConfig() : ablation_sets(default_ablation_sets()) {}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  try {
    if (key == "corpus_dir") c.corpus_dir = std::string(v);
    else if (key == "model_dir") c.model_dir = std::string(v);
    else if (key == "prediction_dir") c.prediction_dir = std::string(v);
    else if (key == "report_dir") c.report_dir = std::string(v);
    else if (key == "rules_dir") c.rules_dir = std::string(v);
    else if (key == "seed") c.seed = c.synthetic.seed = c.training.seed = parse_uint(key, v);
    else if (key == "jobs") {
      c.jobs = parse_uint(key, v);
      if (c.jobs == 0) bad(key, "must be at least 1");
    }
    else if (key == "feature.window") c.features.window = parse_uint(key, v);
    else if (key == "feature.sets") c.features.sets = parse_feature_sets(v);
    else if (key == "feature.chi2_anchor_point") c.features.chi2_anchor_point = parse_real(key, v);
    else if (key == "feature.chi2_anchor_relation") c.features.chi2_anchor_relation = parse_real(key, v);
    else if (key == "feature.cross_section_previous") c.features.cross_section_previous = parse_bool(key, v);
    else if (key == "training.c") c.training.c = parse_real(key, v);
    else if (key == "training.epochs") c.training.epochs = parse_uint(key, v);
    else if (key == "training.t0") c.training.t0 = parse_real(key, v);
    else if (key == "training.positive_weight") c.training.positive_weight = parse_real(key, v);
    else if (key == "synthetic.documents") c.synthetic.documents = parse_uint(key, v);
    else if (key == "synthetic.min_ritimexes") c.synthetic.min_ritimexes = parse_uint(key, v);
    else if (key == "synthetic.max_ritimexes") c.synthetic.max_ritimexes = parse_uint(key, v);
    else if (key == "synthetic.anchor_marginals") c.synthetic.anchor_marginals = parse_reals<4>(key, v);
    else if (key == "synthetic.relation_probabilities") c.synthetic.relation_probabilities = parse_reals<3>(key, v);
    else if (key == "synthetic.duration_rate") c.synthetic.duration_rate = parse_real(key, v);
    else if (key == "pipeline.oracle_mode") c.pipeline.oracle_mode = parse_bool(key, v);
    else if (key == "pipeline.cross_section_previous") c.pipeline.cross_section_previous = parse_bool(key, v);
    else if (key == "evaluation.mode") c.mode = parse_match_mode(v);
    else if (key == "ablation.folds") c.folds = parse_uint(key, v);
    else if (key == "ablation.sets") {
      c.ablation_sets.clear();
      std::size_t pos = 0;
      while (pos <= v.size()) {
        const std::size_t semi = std::min(v.find(';', pos), v.size());
        c.ablation_sets.push_back(parse_feature_sets(trim(v.substr(pos, semi - pos))));
        pos = semi + 1;
      }
    }
    else bad(key, "unknown configuration key");
  } catch (const ParseError& e) {
    if (e.component() == key) throw;
    bad(key, e.what());
  }
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(number);
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ParseError("config", where + ": expected key = value");
    try {
      apply_setting(c, trim(l.substr(0, eq)), l.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.component(), where + ": " + e.what());
    }
  }
  return c;
}

std::vector<std::string> run_config_lines(const RunConfig& c) {
  std::string sets;
  for (const auto& s : c.ablation_sets) sets += (sets.empty() ? "" : ";") + format_feature_sets(s);
  return {
      "corpus_dir = " + c.corpus_dir.string(),
      "model_dir = " + c.model_dir.string(),
      "prediction_dir = " + c.prediction_dir.string(),
      "report_dir = " + c.report_dir.string(),
      "rules_dir = " + c.rules_dir.string(),
      "seed = " + std::to_string(c.seed),
      "jobs = " + std::to_string(c.jobs),
      "feature.window = " + std::to_string(c.features.window),
      "feature.sets = " + format_feature_sets(c.features.sets),
      "feature.chi2_anchor_point = " + real(c.features.chi2_anchor_point),
      "feature.chi2_anchor_relation = " + real(c.features.chi2_anchor_relation),
      "feature.cross_section_previous = " + boolean(c.features.cross_section_previous),
      "training.c = " + real(c.training.c),
      "training.epochs = " + std::to_string(c.training.epochs),
      "training.t0 = " + real(c.training.t0),
      "training.positive_weight = " + real(c.training.positive_weight),
      "synthetic.documents = " + std::to_string(c.synthetic.documents),
      "synthetic.min_ritimexes = " + std::to_string(c.synthetic.min_ritimexes),
      "synthetic.max_ritimexes = " + std::to_string(c.synthetic.max_ritimexes),
      "synthetic.anchor_marginals = " + reals(c.synthetic.anchor_marginals),
      "synthetic.relation_probabilities = " + reals(c.synthetic.relation_probabilities),
      "synthetic.duration_rate = " + real(c.synthetic.duration_rate),
      "pipeline.oracle_mode = " + boolean(c.pipeline.oracle_mode),
      "pipeline.cross_section_previous = " + boolean(c.pipeline.cross_section_previous),
      "evaluation.mode = " + std::string(to_string(c.mode)),
      "ablation.folds = " + std::to_string(c.folds),
      "ablation.sets = " + sets,
  };
}

std::string format_run_config(const RunConfig& c) {
  std::string out;
  for (const auto& l : run_config_lines(c)) out += l + "\n";
  return out;
}

}  // namespace rinorm
