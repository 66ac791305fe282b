#include <gtest/gtest.h>

#include <cmath>

#include "deeprules/errors.hpp"
#include "deeprules/fixtures.hpp"
#include "deeprules/model_io.hpp"
#include "deeprules/network.hpp"
#include "oracles.hpp"

using namespace deeprules;

namespace {

NetworkConfig config(std::vector<std::size_t> sizes, double l, double p, std::uint64_t seed) {
  NetworkConfig c;
  c.hidden_sizes = std::move(sizes);
  c.avg_rule_length = l;
  c.init_probability = p;
  c.seed = seed;
  return c;
}

bool first_layer_contradiction_free(const RuleNetwork& net) {
  const Schema& s = net.schema();
  const BitMatrix& w = net.weights(0);
  for (std::size_t k = 0; k < w.cols(); ++k)
    for (std::size_t a = 0; a < s.attribute_count(); ++a) {
      std::size_t on = 0;
      for (std::size_t v = 0; v < s.attributes()[a].values.size(); ++v) on += w.get(s.column(a, v), k);
      if (on > 1) return false;
    }
  return true;
}

}  // namespace

TEST(CountWeights, MatchesLayerProducts) {
  EXPECT_EQ(count_weights(config({32, 16, 8, 4, 2}, 2, 0.05, 0), 20), 1322u);
  EXPECT_EQ(count_weights(config({20}, 5, 0.05, 0), 20), 420u);
  EXPECT_EQ(count_weights(config({1}, 1, 0.05, 0), 10), 11u);
  EXPECT_EQ(count_weights(config({9, 3, 2}, 1, 0.05, 0), 20), 180u + 27u + 6u + 2u);
}

TEST(Initialize, InvariantsHoldForManySeeds) {
  const Schema schema({{"a", {"1", "0"}, true}, {"b", {"x", "y", "z"}, false}, {"c", {"1", "0"}, true},
                       {"d", {"p", "q"}, false}, {"e", {"1", "0"}, true}});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const RuleNetwork net = initialize(config({8, 4, 2}, 2, 0.1, seed), schema);
    const auto& last = net.weights(net.weight_layer_count() - 1);
    ASSERT_EQ(last.count(), last.rows()) << "seed " << seed;
    for (std::size_t i = 1; i < net.weight_layer_count(); ++i)
      for (std::size_t j = 0; j < net.weights(i).rows(); ++j) ASSERT_TRUE(net.weights(i).row_any(j));
    ASSERT_TRUE(first_layer_contradiction_free(net)) << "seed " << seed;
    // With 8 conjunctions over 5 attributes every literal finds a free node.
    for (std::size_t j = 0; j < net.weights(0).rows(); ++j) ASSERT_TRUE(net.weights(0).row_any(j));
  }
}

TEST(Initialize, ShallowNetworkIgnoresP) {
  const Schema schema = Schema::booleans(10);
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_EQ(initialize(config({20}, 5, 0.01, seed), schema), initialize(config({20}, 5, 0.9, seed), schema));
}

TEST(Initialize, FullRuleLengthSelectsEveryAttribute) {
  const Schema schema = Schema::booleans(6);
  const RuleNetwork net = initialize(config({5}, 6, 0.05, 3), schema);
  for (std::size_t k = 0; k < 5; ++k) {
    std::size_t on = 0;
    for (std::size_t j = 0; j < schema.literal_count(); ++j) on += net.weights(0).get(j, k);
    EXPECT_GE(on, 6u);
  }
  EXPECT_TRUE(first_layer_contradiction_free(net));
}

TEST(Initialize, RuleLengthAboveAttributeCountThrows) {
  EXPECT_THROW(initialize(config({5}, 4, 0.05, 0), Schema::booleans(3)), std::invalid_argument);
}

TEST(Initialize, InnerDensityTracksP) {
  // Monte-Carlo estimate against the expected density including the forced
  // weight a row receives when none was drawn: p + (1-p)^k / k per weight.
  const Schema schema = Schema::booleans(10);
  const std::vector<std::size_t> sizes{32, 16, 8, 4, 2};
  const double p = 0.05;
  double observed[3] = {0, 0, 0};
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    const RuleNetwork net = initialize(config(sizes, 2, p, static_cast<std::uint64_t>(s)), schema);
    for (std::size_t i = 1; i <= 3; ++i)
      observed[i - 1] += static_cast<double>(net.weights(i).count()) / static_cast<double>(net.weights(i).rows() *
                                                                                           net.weights(i).cols());
  }
  for (std::size_t i = 1; i <= 3; ++i) {
    const double k = static_cast<double>(sizes[i]);
    const double expected = p + std::pow(1 - p, k) / k;
    EXPECT_NEAR(observed[i - 1] / runs, expected, 0.01) << "layer " << i;
  }
}

TEST(Initialize, SameSeedSameNetwork) {
  const Schema schema = Schema::booleans(10);
  EXPECT_EQ(initialize(config({32, 8, 2}, 3, 0.05, 42), schema), initialize(config({32, 8, 2}, 3, 0.05, 42), schema));
  EXPECT_NE(initialize(config({32, 8, 2}, 3, 0.05, 42), schema), initialize(config({32, 8, 2}, 3, 0.05, 43), schema));
}

TEST(Predict, MatchesRecursiveOracleOnAllInputs) {
  Rng rng(5);
  const std::vector<std::vector<std::size_t>> shapes = {{1}, {3}, {4, 2}, {8, 4, 2}, {5, 3, 2, 2}, {2, 2, 2, 2, 2}};
  for (int trial = 0; trial < 120; ++trial) {
    const Schema schema = Schema::booleans(2 + rng.index(5));  // up to 12 literals
    const BitMatrix inputs = schema.enumerate_assignments();
    const RuleNetwork net = oracle::random_network(schema, shapes[trial % shapes.size()], 0.3, rng);
    const BitVector got = predict(net, inputs);
    for (std::size_t r = 0; r < inputs.rows(); ++r)
      ASSERT_EQ(got.get(r), oracle::eval_network(net, inputs, r)) << "trial " << trial << " row " << r;
  }
}

TEST(Predict, LayerOutputsEndInPrediction) {
  Rng rng(8);
  const Schema schema = Schema::booleans(4);
  const BitMatrix x = schema.enumerate_assignments();
  for (auto shape : {std::vector<std::size_t>{6, 3, 2}, std::vector<std::size_t>{4, 2}}) {
    const RuleNetwork net = oracle::random_network(schema, shape, 0.4, rng);
    const auto outs = layer_outputs(net, x);
    ASSERT_EQ(outs.size(), net.weight_layer_count());
    EXPECT_EQ(outs.back().column(0), predict(net, x));
  }
}

TEST(Predict, DimensionMismatchThrows) {
  const RuleNetwork net(Schema::booleans(3), {2});
  EXPECT_THROW(predict(net, BitMatrix(2, 5)), std::invalid_argument);
}

TEST(Predict, HierarchicalConceptSpotChecks) {
  const RuleNetwork net = fixtures::hierarchical_concept_network();
  const Schema& s = net.schema();
  auto row = [&](std::initializer_list<char> true_vars) {
    BitMatrix x(1, s.literal_count());
    for (std::size_t a = 0; a < 10; ++a) {
      bool on = false;
      for (char v : true_vars) on = on || static_cast<std::size_t>(v - 'a') == a;
      x.set(0, s.column(a, on ? 0 : 1), true);
    }
    return x;
  };
  // b, not d, i: first flat rule fires.
  EXPECT_TRUE(predict(net, row({'b', 'i'})).get(0));
  // All variables false: only "not d" holds, nothing fires.
  EXPECT_FALSE(predict(net, row({})).get(0));
  EXPECT_TRUE(predict(net, row({'c'})).get(0));
  EXPECT_TRUE(predict(net, row({'b', 'd', 'f', 'h'})).get(0));
}

TEST(Predict, ParityFixtureOnAllInputs) {
  const RuleNetwork net = fixtures::parity_network();
  const BitMatrix x = net.schema().enumerate_assignments();
  ASSERT_EQ(x.rows(), 32u);
  const BitVector y = predict(net, x);
  for (std::size_t r = 0; r < 32; ++r) {
    bool v[5];
    for (std::size_t a = 0; a < 5; ++a) v[a] = x.get(r, 2 * a);
    EXPECT_EQ(y.get(r), fixtures::parity_oracle(v[0], v[1], v[2], v[3], v[4])) << r;
  }
}

TEST(ModelIo, RoundTripsRandomNetworks) {
  Rng rng(13);
  const Schema schema({{"tl", {"b", "o", "x"}, false}, {"q", {"1", "0"}, true}, {"r", {"u", "v"}, false}});
  for (int trial = 0; trial < 50; ++trial) {
    const RuleNetwork net = oracle::random_network(schema, {1 + rng.index(9), 1 + rng.index(5), 2}, 0.3, rng);
    EXPECT_EQ(load_model(save_model(net)), net);
  }
}

TEST(ModelIo, SaveIsStableText) {
  const RuleNetwork net = fixtures::parity_network();
  EXPECT_EQ(save_model(net), save_model(load_model(save_model(net))));
  EXPECT_NE(save_model(net).find("\"version\": 1"), std::string::npos);
}

TEST(ModelIo, TruncatedDocumentIsParseError) {
  const std::string doc = save_model(fixtures::parity_network());
  EXPECT_THROW(load_model(doc.substr(0, doc.size() / 2)), ParseError);
}

TEST(ModelIo, VersionMismatchIsReported) {
  std::string doc = save_model(fixtures::parity_network());
  doc.replace(doc.find("\"version\": 1"), 12, "\"version\": 7");
  EXPECT_THROW(load_model(doc), UnsupportedVersionError);
}

TEST(ModelIo, StructuralErrorsNameTheLocation) {
  std::string doc = save_model(fixtures::hierarchical_concept_network());
  const auto pos = doc.find("\"layer_sizes\"");
  doc.replace(doc.find("20", pos), 2, "21");
  try {
    load_model(doc, "m.json");
    FAIL() << "mismatched input size accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "m.json at /layer_sizes/0");
  }
}
