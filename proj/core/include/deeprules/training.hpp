#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/evaluator.hpp"
#include "deeprules/network.hpp"
#include "deeprules/random.hpp"

namespace deeprules {

inline constexpr std::size_t kUnboundedFlips = std::numeric_limits<std::size_t>::max();

struct TrainParams {
  std::size_t n_epochs = 5;
  std::size_t batch_size = 50;
  std::size_t max_flips = kUnboundedFlips;  // permanent flips per mini-batch
  std::uint64_t shuffle_seed = 0;

  void validate() const;

  friend bool operator==(const TrainParams&, const TrainParams&) = default;
};

/// Fraction of positions where the two vectors agree.
/// Throws std::invalid_argument on a length mismatch.
double accuracy(const BitVector& y_true, const BitVector& y_pred);

/// Every single-weight flip in scan order: weight layer, then target node,
/// then source node. A first-layer flip that switches a literal on carries
/// the other literals of that attribute already on in the target conjunction
/// as companions.
std::vector<Flip> enumerate_flips(const RuleNetwork& net);

struct OptimizeResult {
  std::size_t flips = 0;
  bool optimal = false;  // stopped because no flip improved the batch
  /// Correct predictions on the batch at entry and after each permanent flip.
  std::vector<std::size_t> correct_history;
  std::size_t batch_size = 0;

  double initial_accuracy() const;
  double final_accuracy() const;
};

/// Greedy batch optimization: repeatedly applies the flip with the highest
/// strictly better batch accuracy (first in scan order on ties) until none
/// improves or `max_flips` flips were applied.
OptimizeResult optimize_coefs(RuleNetwork& net, const BitMatrix& x, const BitVector& y,
                              std::span<const std::size_t> rows, std::size_t max_flips = kUnboundedFlips);
OptimizeResult optimize_coefs(RuleNetwork& net, const BitMatrix& x, const BitVector& y,
                              std::size_t max_flips = kUnboundedFlips);

/// One record per processed mini-batch.
struct TraceRecord {
  std::size_t epoch = 0;
  std::size_t batch = 0;
  double train_accuracy = 0.0;  // on the complete training set

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct FitResult {
  double initial_accuracy = 0.0;
  double best_accuracy = 0.0;   // best full-set accuracy seen during the epochs
  double final_accuracy = 0.0;  // after the closing full-set optimization
  std::size_t total_flips = 0;
  std::vector<TraceRecord> trace;
};

/// Mini-batch training. Shuffles per epoch, optimizes each batch (the last
/// batch may be short), keeps the weights with the best full-training-set
/// accuracy, restores them after the last epoch and finishes with an
/// unbounded optimize_coefs over the whole training set.
///
/// Throws std::invalid_argument for an empty training set.
FitResult fit(RuleNetwork& net, const BitMatrix& x, const BitVector& y, const TrainParams& params, Rng& rng);
/// Same, shuffling with Rng(params.shuffle_seed).
FitResult fit(RuleNetwork& net, const BitMatrix& x, const BitVector& y, const TrainParams& params);

/// Writes `epoch,batch,train_accuracy` rows with a header.
void write_trace(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace deeprules
