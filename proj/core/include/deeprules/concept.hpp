#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/network.hpp"
#include "deeprules/rule_set.hpp"
#include "deeprules/schema.hpp"

namespace deeprules {

/// Every assignment of `n_vars` boolean attributes named a, b, c, ...
/// Row r sets attribute a to true iff bit (n_vars - 1 - a) of r is zero, so
/// the first row is all-true and the first attribute varies slowest.
/// Labels are all zero. Throws std::invalid_argument above 20 variables.
OneHotDataset generate_inputs(std::size_t n_vars = 10);

/// Two-level minimization of a complete truth table given in
/// generate_inputs row order: Quine-McCluskey prime implicants, essential
/// primes, then greedy cover. Columns refer to Schema::booleans(n_vars).
/// Throws std::invalid_argument unless labels.size() == 2^n_vars and
/// n_vars <= 12.
RuleSet minimize_dnf(const BitVector& labels, std::size_t n_vars);

struct ConceptOptions {
  std::size_t n_vars = 10;
  std::vector<std::size_t> hidden_sizes{32, 16, 8, 4, 2};
  double avg_rule_length = 2.0;
  double init_probability = 0.2;
  double min_positive_ratio = 0.2;
  double max_positive_ratio = 0.8;
  std::size_t max_rules = 20;
  std::size_t max_attempts = 1000;
};

struct Concept {
  std::uint64_t seed = 0;            // the requested seed
  std::uint64_t generator_seed = 0;  // seed of the accepted attempt
  std::size_t attempts = 0;          // 1 when the first attempt was accepted
  RuleNetwork network;
  OneHotDataset data;                // all 2^n_vars inputs, labelled by the network
  RuleSet minimized;
};

/// Seed of attempt `attempt` (0-based) when generating from `seed`.
std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt);

/// Random concept: initializes a generator network, fits it with one
/// unbounded optimize_coefs call to two distinct random inputs (the first
/// labelled positive, the second negative) and labels every input. Accepts
/// when the positive ratio lies in the configured range and the minimized
/// DNF has at most max_rules rules; otherwise retries with the next attempt
/// seed. Throws GenerationError after max_attempts rejections.
Concept generate_concept(std::uint64_t seed, const ConceptOptions& options = {});

}  // namespace deeprules
