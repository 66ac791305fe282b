#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/network.hpp"
#include "deeprules/schema.hpp"

namespace deeprules {

/// Sorted literal columns; an empty conjunction is always true.
using Conjunction = std::vector<std::size_t>;

/// A DNF over one-hot literal columns: one conjunction per rule.
struct RuleSet {
  std::vector<Conjunction> rules;

  std::size_t size() const noexcept { return rules.size(); }
  bool empty() const noexcept { return rules.empty(); }

  bool evaluate(std::span<const Word> row) const;
  BitVector evaluate(const BitMatrix& x) const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// Drops conjunctions using two literals of one attribute, removes duplicates
/// and absorbed supersets, and sorts rules by length then columns.
RuleSet normalize(RuleSet rules, const Schema& schema);

struct ExtractOptions {
  /// Upper bound on intermediate terms produced while expanding one node.
  std::size_t term_budget = 100'000;
};

/// Expands the network into an equivalent DNF over its input literals,
/// layer by layer with absorption after every node.
/// Throws ResourceLimitError when a node's expansion exceeds the budget.
RuleSet extract_dnf(const RuleNetwork& net, const ExtractOptions& options = {});

/// `head :- lit, lit.` per rule; an empty set yields a single comment line.
std::string to_prolog(const RuleSet& rules, const Schema& schema, std::string_view head);

/// Names for intermediate predicates, keyed by (layer, node) with layer in
/// 1..n+1. Unnamed disjunctive nodes become `h<layer>_<node>`.
using PredicateNames = std::map<std::pair<std::size_t, std::size_t>, std::string>;

struct StructuredOptions {
  PredicateNames names;
  /// Detect predicates that are complements or copies of earlier ones by
  /// comparing truth tables; only used when the schema has at most this many
  /// complete assignments.
  std::size_t truth_table_limit = std::size_t{1} << 16;
};

/// Exports the network as a layered rule base: each disjunctive node becomes
/// a predicate whose rules are its incoming conjunctions. Single-atom nodes
/// are inlined and complementary predicates are written as `not p`.
std::string to_prolog_structured(const RuleNetwork& net, std::string_view head,
                                 const StructuredOptions& options = {});

}  // namespace deeprules
