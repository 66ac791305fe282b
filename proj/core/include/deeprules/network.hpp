#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/random.hpp"
#include "deeprules/schema.hpp"

namespace deeprules {

/// Structure and initialization hyperparameters of a rule network.
struct NetworkConfig {
  std::vector<std::size_t> hidden_sizes;  // s_1 .. s_n; the single output node is implicit
  double avg_rule_length = 2.0;           // expected attributes per first-layer conjunction
  double init_probability = 0.05;         // weight density of the inner layers
  bool first_layer_conjunctive = true;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for empty/zero layers, a negative rule
  /// length, p outside [0, 1], or a disjunctive first layer.
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Boolean rule network of alternating conjunctive and disjunctive layers.
///
/// weights(i) has shape s_i x s_{i+1}; weight (j, k) connects node j of layer
/// i to node k of layer i+1. Layer i+1 is conjunctive when i is even. With an
/// odd number of hidden layers the output node is disjunctive; with an even
/// number it is conjunctive.
class RuleNetwork {
 public:
  RuleNetwork() = default;
  /// All-false weights for the given structure.
  RuleNetwork(Schema schema, std::vector<std::size_t> hidden_sizes);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t input_size() const noexcept { return schema_.literal_count(); }
  std::size_t hidden_layer_count() const noexcept { return weights_.empty() ? 0 : weights_.size() - 1; }
  std::size_t weight_layer_count() const noexcept { return weights_.size(); }

  /// s_0 .. s_{n+1}, including input and output.
  std::vector<std::size_t> layer_sizes() const;
  std::vector<std::size_t> hidden_sizes() const;

  /// Whether the nodes fed by weight layer `i` (i.e. layer i+1) are conjunctions.
  static constexpr bool is_conjunctive_target(std::size_t i) noexcept { return i % 2 == 0; }
  bool output_is_conjunctive() const noexcept { return is_conjunctive_target(weights_.size() - 1); }

  const BitMatrix& weights(std::size_t i) const { return weights_.at(i); }
  BitMatrix& weights(std::size_t i) { return weights_.at(i); }
  const std::vector<BitMatrix>& all_weights() const noexcept { return weights_; }

  std::size_t weight_count() const noexcept;
  std::size_t true_weight_count() const noexcept;

  friend bool operator==(const RuleNetwork&, const RuleNetwork&) = default;

 private:
  Schema schema_;
  std::vector<BitMatrix> weights_;
};

/// Random initialization.
///
/// First layer: every conjunction selects each attribute with probability
/// avg_rule_length / |A| and, when selected, one of its literals uniformly.
/// Inner layers: each weight is true with probability init_probability.
/// Last layer: all true. Afterwards every node without an outgoing true
/// weight gets one, chosen uniformly; for input literals only among
/// conjunctions that do not already use another literal of the same attribute.
///
/// Throws std::invalid_argument when avg_rule_length exceeds |A|.
RuleNetwork initialize(const NetworkConfig& config, const Schema& schema, Rng& rng);
/// Same, seeded from config.seed.
RuleNetwork initialize(const NetworkConfig& config, const Schema& schema);

/// Forward pass through alternating NOR layers, A(i+1) = not(A(i)) (.) W(i)
/// starting from A(0) = x. Rows of `x` are one-hot inputs.
BitVector predict(const RuleNetwork& net, const BitMatrix& x);

/// Positive-polarity outputs of every layer 1..n+1 for the rows of `x`:
/// element [l-1] has shape x.rows() x s_l, conjunctive layers included.
std::vector<BitMatrix> layer_outputs(const RuleNetwork& net, const BitMatrix& x);

/// sum_i s_i * s_{i+1} with s_0 = input_size and s_{n+1} = 1.
std::size_t count_weights(const NetworkConfig& config, std::size_t input_size);

}  // namespace deeprules
