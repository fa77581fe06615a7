#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rinorm/document.hpp"

namespace rinorm {

struct SyntheticConfig {
  std::size_t documents = 200;
  std::size_t min_ritimexes = 8;  // per document
  std::size_t max_ritimexes = 12;
  // Share of RI-TIMEXes carrying each label, kAnchorPointLabels order. Labels
  // co-occur, so these may sum past 1.
  std::array<double, 4> anchor_marginals = {0.53, 0.16, 0.37, 0.35};
  // Before, After, EqualDuring; must sum to 1.
  std::array<double, 3> relation_probabilities = {11.0 / 98, 46.0 / 98, 41.0 / 98};
  // Chance of a DURATION sentence before each RI-TIMEX.
  double duration_rate = 0.1;
  std::uint64_t seed = 42;

  friend bool operator==(const SyntheticConfig&, const SyntheticConfig&) = default;
};

// A gold label set and its probability. The generator realizes exactly these
// sets: {A}, {D}, {P}, {Q}, {P,Q} and {A,P,Q} (A admission, D discharge,
// P previous TIMEX, Q previous absolute TIMEX).
struct AnchorPattern {
  std::vector<AnchorPointLabel> labels;
  double probability = 0;
};

// Joint distribution over label sets matching the configured marginals, with
// the least three-way overlap. Throws DataError if no such distribution exists.
std::vector<AnchorPattern> anchor_patterns(const SyntheticConfig& config);

// Throws DataError on an invalid or infeasible configuration.
void validate(const SyntheticConfig& config);

// Document `index` of the corpus; depends only on (config, index).
Document generate_document(const SyntheticConfig& config, std::size_t index);

std::vector<Document> generate_synthetic(const SyntheticConfig& config, std::size_t jobs = 1);

}  // namespace rinorm
