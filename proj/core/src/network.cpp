#include "deeprules/network.hpp"

#include <stdexcept>
#include <string>

namespace deeprules {

void NetworkConfig::validate() const {
  if (hidden_sizes.empty()) throw std::invalid_argument("network needs at least one hidden layer");
  for (std::size_t s : hidden_sizes)
    if (s == 0) throw std::invalid_argument("hidden layer sizes must be positive");
  if (!(avg_rule_length >= 0.0)) throw std::invalid_argument("average rule length must be non-negative");
  if (!(init_probability >= 0.0 && init_probability <= 1.0))
    throw std::invalid_argument("initialization probability must lie in [0, 1]");
  if (!first_layer_conjunctive) throw std::invalid_argument("only conjunctive first layers are supported");
}

RuleNetwork::RuleNetwork(Schema schema, std::vector<std::size_t> hidden_sizes) : schema_(std::move(schema)) {
  if (hidden_sizes.empty()) throw std::invalid_argument("network needs at least one hidden layer");
  std::vector<std::size_t> sizes;
  sizes.push_back(schema_.literal_count());
  sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(1);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) weights_.emplace_back(sizes[i], sizes[i + 1]);
}

std::vector<std::size_t> RuleNetwork::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (weights_.empty()) return sizes;
  sizes.push_back(weights_.front().rows());
  for (const auto& w : weights_) sizes.push_back(w.cols());
  return sizes;
}

std::vector<std::size_t> RuleNetwork::hidden_sizes() const {
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i + 1 < weights_.size(); ++i) sizes.push_back(weights_[i].cols());
  return sizes;
}

std::size_t RuleNetwork::weight_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : weights_) n += w.rows() * w.cols();
  return n;
}

std::size_t RuleNetwork::true_weight_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : weights_) n += w.count();
  return n;
}

namespace {

void init_first_layer(BitMatrix& w, const Schema& schema, double select_p, Rng& rng) {
  for (std::size_t k = 0; k < w.cols(); ++k) {
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      if (!rng.bernoulli(select_p)) continue;
      const std::size_t n_values = schema.attributes()[a].values.size();
      w.set(schema.column(a, rng.index(n_values)), k, true);
    }
  }
  // Connect every literal, but never next to another literal of its attribute.
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < w.rows(); ++j) {
    if (w.row_any(j)) continue;
    const std::size_t a = schema.attribute_of(j);
    const std::size_t first = schema.first_column(a);
    const std::size_t n_values = schema.attributes()[a].values.size();
    candidates.clear();
    for (std::size_t k = 0; k < w.cols(); ++k) {
      bool used = false;
      for (std::size_t v = 0; v < n_values && !used; ++v) used = w.get(first + v, k);
      if (!used) candidates.push_back(k);
    }
    if (!candidates.empty()) w.set(j, candidates[rng.index(candidates.size())], true);
  }
}

void init_inner_layer(BitMatrix& w, double p, Rng& rng) {
  for (std::size_t j = 0; j < w.rows(); ++j)
    for (std::size_t k = 0; k < w.cols(); ++k)
      if (rng.bernoulli(p)) w.set(j, k, true);
  for (std::size_t j = 0; j < w.rows(); ++j)
    if (!w.row_any(j)) w.set(j, rng.index(w.cols()), true);
}

}  // namespace

RuleNetwork initialize(const NetworkConfig& config, const Schema& schema, Rng& rng) {
  config.validate();
  const double n_attrs = static_cast<double>(schema.attribute_count());
  if (config.avg_rule_length > n_attrs)
    throw std::invalid_argument("average rule length " + std::to_string(config.avg_rule_length) +
                                " exceeds the attribute count " + std::to_string(schema.attribute_count()));

  RuleNetwork net(schema, config.hidden_sizes);
  const std::size_t last = net.weight_layer_count() - 1;
  init_first_layer(net.weights(0), schema, n_attrs > 0 ? config.avg_rule_length / n_attrs : 0.0, rng);
  for (std::size_t i = 1; i < last; ++i) init_inner_layer(net.weights(i), config.init_probability, rng);
  auto& out = net.weights(last);
  for (std::size_t j = 0; j < out.rows(); ++j) out.set(j, 0, true);
  return net;
}

RuleNetwork initialize(const NetworkConfig& config, const Schema& schema) {
  Rng rng(config.seed);
  return initialize(config, schema, rng);
}

BitVector predict(const RuleNetwork& net, const BitMatrix& x) {
  if (x.cols() != net.input_size())
    throw std::invalid_argument("predict: input has " + std::to_string(x.cols()) + " columns, network expects " +
                                std::to_string(net.input_size()));
  BitMatrix act = x;
  for (const auto& w : net.all_weights()) act = nor_layer(act, w);
  BitVector out = act.column(0);
  if (!net.output_is_conjunctive()) return out;
  // A conjunctive output arrives negated; undo it.
  BitVector flipped(out.size());
  for (std::size_t r = 0; r < out.size(); ++r) flipped.set(r, !out.get(r));
  return flipped;
}

std::vector<BitMatrix> layer_outputs(const RuleNetwork& net, const BitMatrix& x) {
  if (x.cols() != net.input_size())
    throw std::invalid_argument("layer_outputs: input width does not match the network");
  std::vector<BitMatrix> outputs;
  BitMatrix act = x;
  for (std::size_t i = 0; i < net.weight_layer_count(); ++i) {
    act = nor_layer(act, net.weights(i));
    outputs.push_back(RuleNetwork::is_conjunctive_target(i) ? negate(act) : act);
  }
  return outputs;
}

std::size_t count_weights(const NetworkConfig& config, std::size_t input_size) {
  std::size_t total = 0;
  std::size_t prev = input_size;
  for (std::size_t s : config.hidden_sizes) {
    total += prev * s;
    prev = s;
  }
  return total + prev;
}

}  // namespace deeprules
