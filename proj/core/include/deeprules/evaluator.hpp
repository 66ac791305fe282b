#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/network.hpp"

namespace deeprules {

/// Toggle of weight (source -> target) in weight layer `layer`, plus the
/// first-layer companions switched off with it so a conjunction never holds
/// two literals of one attribute.
struct Flip {
  std::size_t layer = 0;
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> companions;

  friend bool operator==(const Flip&, const Flip&) = default;
};

/// Activations of a network over a fixed set of rows, stored node-major (one
/// bit per row) so a flip can be scored by recomputing only its forward cone.
///
/// Holds a reference to the network; apply() mutates it. Any other change to
/// the network's weights requires refresh().
class BatchEvaluator {
 public:
  /// Evaluates rows `rows` of (x, y).
  BatchEvaluator(RuleNetwork& net, const BitMatrix& x, const BitVector& y, std::span<const std::size_t> rows);
  /// Evaluates every row of (x, y).
  BatchEvaluator(RuleNetwork& net, const BitMatrix& x, const BitVector& y);

  std::size_t size() const noexcept { return rows_; }
  std::size_t correct() const noexcept { return correct_; }
  double accuracy() const noexcept;
  BitVector output() const;

  /// Correct-prediction count the network would reach with `flip` applied.
  /// Leaves weights and activations unchanged.
  std::size_t score(const Flip& flip);

  /// Applies `flip` to the network and updates the activations.
  void apply(const Flip& flip);

  /// Recomputes everything from the network's current weights.
  void refresh();

 private:
  void load_inputs(const BitMatrix& x, const BitVector& y, std::span<const std::size_t> rows);
  void rebuild_sources();
  void compute_layer(std::size_t weight_layer, std::vector<Word>& target);
  void compute_node(std::size_t weight_layer, std::span<const Word> sources, const std::vector<Word>& inputs,
                    Word* out) const;
  std::size_t count_correct(const Word* output) const;
  Word* node(std::vector<Word>& layer, std::size_t k) { return layer.data() + k * words_; }
  const Word* node(const std::vector<Word>& layer, std::size_t k) const { return layer.data() + k * words_; }

  RuleNetwork& net_;
  std::size_t rows_ = 0;
  std::size_t words_ = 0;
  Word tail_ = 0;
  std::vector<std::size_t> sizes_;
  std::vector<Word> labels_;
  std::vector<std::vector<Word>> act_;      // committed activations, layers 0..n+1
  std::vector<std::vector<Word>> scratch_;  // act_ plus the pending flip's overlay
  std::vector<BitMatrix> sources_;          // transposed weights: row k = inputs of node k
  std::vector<std::vector<Word>> changed_;  // per layer, nodes touched by the pending flip
  std::vector<std::vector<std::size_t>> touched_;
  std::vector<Word> flip_sources_;
  std::vector<Word> node_buffer_;
  std::size_t correct_ = 0;
};

}  // namespace deeprules
