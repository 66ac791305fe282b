#pragma once

// Independent reference implementations used by the tests.

#include <vector>

#include "deeprules/network.hpp"
#include "deeprules/random.hpp"

namespace oracle {

// Direct recursive AND/OR evaluation of node k of layer `layer` on one input row.
inline bool eval_node(const deeprules::RuleNetwork& net, const std::vector<bool>& input, std::size_t layer,
                      std::size_t k) {
  if (layer == 0) return input[k];
  const auto& w = net.weights(layer - 1);
  const bool conj = (layer - 1) % 2 == 0;
  bool acc = conj;
  for (std::size_t j = 0; j < w.rows(); ++j) {
    if (!w.get(j, k)) continue;
    const bool v = eval_node(net, input, layer - 1, j);
    acc = conj ? (acc && v) : (acc || v);
  }
  return acc;
}

inline bool eval_network(const deeprules::RuleNetwork& net, const deeprules::BitMatrix& x, std::size_t row) {
  std::vector<bool> input(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) input[c] = x.get(row, c);
  return eval_node(net, input, net.weight_layer_count(), 0);
}

// Network with uniformly random weights (no initialization scheme).
inline deeprules::RuleNetwork random_network(const deeprules::Schema& schema, std::vector<std::size_t> hidden,
                                             double density, deeprules::Rng& rng) {
  deeprules::RuleNetwork net(schema, std::move(hidden));
  for (std::size_t i = 0; i < net.weight_layer_count(); ++i) {
    auto& w = net.weights(i);
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c)
        if (rng.bernoulli(density)) w.set(r, c, true);
  }
  return net;
}

// Uniformly random complete one-hot rows.
inline deeprules::BitMatrix random_rows(const deeprules::Schema& schema, std::size_t n, deeprules::Rng& rng) {
  deeprules::BitMatrix x(n, schema.literal_count());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < schema.attribute_count(); ++a)
      x.set(r, schema.column(a, rng.index(schema.attributes()[a].values.size())), true);
  return x;
}

}  // namespace oracle
