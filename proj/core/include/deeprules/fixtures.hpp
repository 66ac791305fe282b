#pragma once

#include <string>

#include "deeprules/network.hpp"
#include "deeprules/rule_set.hpp"

namespace deeprules::fixtures {

/// Hand-built network for the 5-bit parity concept over x1..x5: true when an
/// even number of the inputs is true. Its disjunctive layers hold the
/// auxiliary predicates parity45, parity345 and parity2345.
RuleNetwork parity_network();

/// Predicate names for to_prolog_structured(parity_network(), "parity", ...).
StructuredOptions parity_export_options();

/// Reference value of the parity concept, used as an oracle.
bool parity_oracle(bool x1, bool x2, bool x3, bool x4, bool x5);

/// ((b & i) | c | j) & ((~b & i) | ~d | h) | (b & d & f & h) over a..j,
/// as a [7, 3, 2] network.
RuleNetwork hierarchical_concept_network();

/// The same concept as nine flat rules over a..j.
RuleSet flat_concept_rules();

}  // namespace deeprules::fixtures
