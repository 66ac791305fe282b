#include "deeprules/fixtures.hpp"

#include <initializer_list>
#include <utility>

namespace deeprules::fixtures {
namespace {

// Sets weights (source -> target) for every target listed with its sources.
void connect(BitMatrix& w, std::initializer_list<std::pair<std::size_t, std::initializer_list<std::size_t>>> nodes) {
  for (const auto& [target, sources] : nodes)
    for (std::size_t s : sources) w.set(s, target, true);
}

// Column of a boolean literal: 2a for the attribute, 2a + 1 for its negation.
constexpr std::size_t pos(std::size_t a) { return 2 * a; }
constexpr std::size_t neg(std::size_t a) { return 2 * a + 1; }

}  // namespace

RuleNetwork parity_network() {
  RuleNetwork net(Schema::booleans({"x1", "x2", "x3", "x4", "x5"}), {10, 8, 8, 6, 6, 4, 2});
  enum { x1, x2, x3, x4, x5 };

  // Conjunctions: the four sign patterns of (x4, x5), then single literals
  // passed through to later layers.
  connect(net.weights(0), {{0, {pos(x4), pos(x5)}},
                           {1, {neg(x4), neg(x5)}},
                           {2, {pos(x4), neg(x5)}},
                           {3, {neg(x4), pos(x5)}},
                           {4, {pos(x3)}},
                           {5, {neg(x3)}},
                           {6, {pos(x2)}},
                           {7, {neg(x2)}},
                           {8, {pos(x1)}},
                           {9, {neg(x1)}}});
  // parity45, its complement, pass-throughs.
  connect(net.weights(1), {{0, {0, 1}}, {1, {2, 3}}, {2, {4}}, {3, {5}}, {4, {6}}, {5, {7}}, {6, {8}}, {7, {9}}});
  connect(net.weights(2), {{0, {2, 1}}, {1, {3, 0}}, {2, {2, 0}}, {3, {3, 1}}, {4, {4}}, {5, {5}}, {6, {6}}, {7, {7}}});
  // parity345, its complement, pass-throughs.
  connect(net.weights(3), {{0, {0, 1}}, {1, {2, 3}}, {2, {4}}, {3, {5}}, {4, {6}}, {5, {7}}});
  connect(net.weights(4), {{0, {2, 1}}, {1, {3, 0}}, {2, {2, 0}}, {3, {3, 1}}, {4, {4}}, {5, {5}}});
  // parity2345, its complement, pass-throughs.
  connect(net.weights(5), {{0, {0, 1}}, {1, {2, 3}}, {2, {4}}, {3, {5}}});
  connect(net.weights(6), {{0, {2, 1}}, {1, {3, 0}}});
  connect(net.weights(7), {{0, {0, 1}}});
  return net;
}

StructuredOptions parity_export_options() {
  StructuredOptions options;
  options.names[{2, 0}] = "parity45";
  options.names[{4, 0}] = "parity345";
  options.names[{6, 0}] = "parity2345";
  return options;
}

bool parity_oracle(bool x1, bool x2, bool x3, bool x4, bool x5) {
  return ((x1 ? 1 : 0) + (x2 ? 1 : 0) + (x3 ? 1 : 0) + (x4 ? 1 : 0) + (x5 ? 1 : 0)) % 2 == 0;
}

RuleNetwork hierarchical_concept_network() {
  RuleNetwork net(Schema::booleans(10), {7, 3, 2});
  enum { a, b, c, d, e, f, g, h, i, j };
  connect(net.weights(0), {{0, {pos(b), pos(i)}},
                           {1, {pos(c)}},
                           {2, {pos(j)}},
                           {3, {neg(b), pos(i)}},
                           {4, {neg(d)}},
                           {5, {pos(h)}},
                           {6, {pos(b), pos(d), pos(f), pos(h)}}});
  connect(net.weights(1), {{0, {0, 1, 2}}, {1, {3, 4, 5}}, {2, {6}}});
  connect(net.weights(2), {{0, {0, 1}}, {1, {2}}});
  connect(net.weights(3), {{0, {0, 1}}});
  return net;
}

RuleSet flat_concept_rules() {
  enum { a, b, c, d, e, f, g, h, i, j };
  RuleSet rules;
  rules.rules = {
      {pos(b), neg(d), pos(i)},         {pos(b), pos(h), pos(i)}, {pos(b), pos(d), pos(f), pos(h)},
      {neg(b), pos(c), pos(i)},         {neg(b), pos(i), pos(j)}, {pos(c), pos(h)},
      {pos(c), neg(d)},                 {neg(d), pos(j)},         {pos(h), pos(j)},
  };
  return rules;
}

}  // namespace deeprules::fixtures
