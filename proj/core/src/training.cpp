#include "deeprules/training.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace deeprules {

void TrainParams::validate() const {
  if (n_epochs < 1) throw std::invalid_argument("n_epochs must be at least 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
}

double accuracy(const BitVector& y_true, const BitVector& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("accuracy: vectors have different lengths (" + std::to_string(y_true.size()) +
                                " vs " + std::to_string(y_pred.size()) + ")");
  if (y_true.empty()) return 0.0;
  const auto a = y_true.words();
  const auto b = y_pred.words();
  std::size_t agree = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    Word same = ~(a[w] ^ b[w]);
    if (w + 1 == a.size()) same &= tail_mask(y_true.size());
    agree += static_cast<std::size_t>(std::popcount(same));
  }
  return static_cast<double>(agree) / static_cast<double>(y_true.size());
}

std::vector<Flip> enumerate_flips(const RuleNetwork& net) {
  std::vector<Flip> flips;
  flips.reserve(net.weight_count());
  const Schema& schema = net.schema();
  for (std::size_t i = 0; i < net.weight_layer_count(); ++i) {
    const BitMatrix& w = net.weights(i);
    for (std::size_t k = 0; k < w.cols(); ++k) {
      for (std::size_t j = 0; j < w.rows(); ++j) {
        Flip f{i, j, k, {}};
        if (i == 0 && !w.get(j, k)) {
          const std::size_t a = schema.attribute_of(j);
          const std::size_t first = schema.first_column(a);
          const std::size_t n_values = schema.attributes()[a].values.size();
          for (std::size_t c = first; c < first + n_values; ++c)
            if (c != j && w.get(c, k)) f.companions.push_back(c);
        }
        flips.push_back(std::move(f));
      }
    }
  }
  return flips;
}

double OptimizeResult::initial_accuracy() const {
  return batch_size == 0 || correct_history.empty()
             ? 0.0
             : static_cast<double>(correct_history.front()) / static_cast<double>(batch_size);
}

double OptimizeResult::final_accuracy() const {
  return batch_size == 0 || correct_history.empty()
             ? 0.0
             : static_cast<double>(correct_history.back()) / static_cast<double>(batch_size);
}

OptimizeResult optimize_coefs(RuleNetwork& net, const BitMatrix& x, const BitVector& y,
                              std::span<const std::size_t> rows, std::size_t max_flips) {
  BatchEvaluator eval(net, x, y, rows);
  OptimizeResult result;
  result.batch_size = rows.size();
  std::size_t best = eval.correct();
  result.correct_history.push_back(best);

  while (result.flips < max_flips) {
    if (best == rows.size()) {
      result.optimal = true;
      break;
    }
    const auto flips = enumerate_flips(net);
    const Flip* chosen = nullptr;
    std::size_t chosen_score = best;
    for (const auto& f : flips) {
      const std::size_t s = eval.score(f);
      if (s > chosen_score) {
        chosen_score = s;
        chosen = &f;
      }
    }
    if (chosen == nullptr) {
      result.optimal = true;
      break;
    }
    eval.apply(*chosen);
    best = eval.correct();
    result.correct_history.push_back(best);
    ++result.flips;
  }
  return result;
}

OptimizeResult optimize_coefs(RuleNetwork& net, const BitMatrix& x, const BitVector& y, std::size_t max_flips) {
  std::vector<std::size_t> all(x.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return optimize_coefs(net, x, y, all, max_flips);
}

FitResult fit(RuleNetwork& net, const BitMatrix& x, const BitVector& y, const TrainParams& params, Rng& rng) {
  params.validate();
  if (x.rows() == 0) throw std::invalid_argument("fit: empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("fit: label count does not match row count");

  const std::size_t n = x.rows();
  auto full_accuracy = [&] { return BatchEvaluator(net, x, y).accuracy(); };

  FitResult result;
  result.initial_accuracy = full_accuracy();
  double best_accuracy = result.initial_accuracy;
  std::vector<BitMatrix> best_weights = net.all_weights();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t n_batches = (n + params.batch_size - 1) / params.batch_size;

  for (std::size_t epoch = 0; epoch < params.n_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t begin = b * params.batch_size;
      const std::size_t end = std::min(n, begin + params.batch_size);
      const auto opt = optimize_coefs(net, x, y, std::span<const std::size_t>(order).subspan(begin, end - begin),
                                      params.max_flips);
      result.total_flips += opt.flips;
      const double acc = full_accuracy();
      result.trace.push_back({epoch, b, acc});
      if (acc > best_accuracy) {
        best_accuracy = acc;
        best_weights = net.all_weights();
      }
    }
  }

  for (std::size_t i = 0; i < best_weights.size(); ++i) net.weights(i) = best_weights[i];
  result.best_accuracy = best_accuracy;
  const auto final_opt = optimize_coefs(net, x, y, kUnboundedFlips);
  result.total_flips += final_opt.flips;
  result.final_accuracy = final_opt.final_accuracy();
  return result;
}

FitResult fit(RuleNetwork& net, const BitMatrix& x, const BitVector& y, const TrainParams& params) {
  Rng rng(params.shuffle_seed);
  return fit(net, x, y, params, rng);
}

void write_trace(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "epoch,batch,train_accuracy\n";
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  for (const auto& t : trace) out << t.epoch << ',' << t.batch << ',' << t.train_accuracy << '\n';
  out.flags(flags);
}

}  // namespace deeprules
