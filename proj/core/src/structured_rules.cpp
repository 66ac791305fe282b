#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "deeprules/errors.hpp"
#include "deeprules/rule_set.hpp"

namespace deeprules {
namespace {

struct Atom {
  enum class Kind { Literal, Predicate, NotPredicate } kind;
  std::size_t layer = 0;  // predicates only
  std::size_t index = 0;  // literal column or node index

  auto key() const { return std::tuple(kind != Kind::Literal, layer, index, kind); }
  friend bool operator==(const Atom& a, const Atom& b) { return a.key() == b.key(); }
  friend bool operator<(const Atom& a, const Atom& b) { return a.key() < b.key(); }
};

struct True {};
struct False {};
using Body = std::vector<Atom>;
/// What a node reduces to: a constant, a single atom, a conjunction of atoms
/// (conjunctive nodes) or a named predicate (disjunctive nodes).
using Resolved = std::variant<True, False, Atom, Body>;

struct Predicate {
  std::size_t layer;
  std::size_t node;
  std::vector<Body> rules;
};

class StructuredExporter {
 public:
  StructuredExporter(const RuleNetwork& net, std::string_view head, const StructuredOptions& options)
      : net_(net), head_(head), options_(options) {
    if (net.schema().assignment_count() <= options.truth_table_limit) {
      const BitMatrix inputs = net.schema().enumerate_assignments(options.truth_table_limit);
      tables_ = layer_outputs(net, inputs);
    }
  }

  std::string run() {
    std::vector<Resolved> previous;
    for (std::size_t i = 0; i < net_.weight_layer_count(); ++i) {
      const BitMatrix& w = net_.weights(i);
      const std::size_t layer = i + 1;
      const bool last = i + 1 == net_.weight_layer_count();
      std::vector<Resolved> current(w.cols());
      for (std::size_t k = 0; k < w.cols(); ++k) {
        std::vector<Resolved> inputs;
        for (std::size_t j = 0; j < w.rows(); ++j) {
          if (!w.get(j, k)) continue;
          inputs.push_back(i == 0 ? Resolved{Atom{Atom::Kind::Literal, 0, j}} : previous[j]);
        }
        current[k] = RuleNetwork::is_conjunctive_target(i) ? conjunction(inputs, layer, k, last)
                                                            : disjunction(inputs, layer, k, last);
      }
      previous = std::move(current);
    }
    return render(previous.at(0));
  }

 private:
  Resolved conjunction(const std::vector<Resolved>& inputs, std::size_t layer, std::size_t node, bool is_head) {
    Body body;
    for (const auto& in : inputs) {
      if (std::holds_alternative<False>(in)) return False{};
      if (std::holds_alternative<True>(in)) continue;
      if (const Atom* a = std::get_if<Atom>(&in)) {
        body.push_back(*a);
      } else {
        // A disjunctive input always resolves to an atom or constant.
        throw std::logic_error("conjunction input is not an atom");
      }
    }
    std::sort(body.begin(), body.end());
    body.erase(std::unique(body.begin(), body.end()), body.end());
    if (contradictory(body)) return False{};
    if (is_head) {
      Predicate p{layer, node, {}};
      if (body.empty()) return True{};
      p.rules.push_back(body);
      head_predicate_ = p;
      return Atom{Atom::Kind::Predicate, layer, node};
    }
    if (body.empty()) return True{};
    if (body.size() == 1) return body.front();
    return body;
  }

  Resolved disjunction(const std::vector<Resolved>& inputs, std::size_t layer, std::size_t node, bool is_head) {
    std::vector<Body> rules;
    for (const auto& in : inputs) {
      if (std::holds_alternative<False>(in)) continue;
      if (std::holds_alternative<True>(in)) return True{};
      if (const Atom* a = std::get_if<Atom>(&in))
        rules.push_back(Body{*a});
      else
        rules.push_back(std::get<Body>(in));
    }
    std::vector<Body> unique;
    for (auto& r : rules)
      if (std::find(unique.begin(), unique.end(), r) == unique.end()) unique.push_back(std::move(r));
    rules = std::move(unique);

    if (is_head) {
      if (rules.empty()) return False{};
      head_predicate_ = Predicate{layer, node, std::move(rules)};
      return Atom{Atom::Kind::Predicate, layer, node};
    }
    if (rules.empty()) return False{};
    if (rules.size() == 1 && rules.front().size() == 1) return rules.front().front();

    if (auto same = match_existing(layer, node)) return *same;
    predicates_.push_back(Predicate{layer, node, std::move(rules)});
    return Atom{Atom::Kind::Predicate, layer, node};
  }

  /// A canonical predicate with the same or the complementary truth table.
  std::optional<Atom> match_existing(std::size_t layer, std::size_t node) const {
    if (tables_.empty()) return std::nullopt;
    const BitMatrix& t = tables_[layer - 1];
    const std::size_t rows = t.rows();
    for (const auto& p : predicates_) {
      const BitMatrix& other = tables_[p.layer - 1];
      bool equal = true, complement = true;
      for (std::size_t r = 0; r < rows && (equal || complement); ++r) {
        const bool a = t.get(r, node), b = other.get(r, p.node);
        equal = equal && a == b;
        complement = complement && a != b;
      }
      if (equal) return Atom{Atom::Kind::Predicate, p.layer, p.node};
      if (complement) return Atom{Atom::Kind::NotPredicate, p.layer, p.node};
    }
    return std::nullopt;
  }

  bool contradictory(const Body& body) const {
    std::set<std::size_t> attrs;
    std::set<std::pair<std::size_t, std::size_t>> positive, negative;
    for (const auto& a : body) {
      if (a.kind == Atom::Kind::Literal) {
        if (!attrs.insert(net_.schema().attribute_of(a.index)).second) return true;
      } else if (a.kind == Atom::Kind::Predicate) {
        positive.insert({a.layer, a.index});
      } else {
        negative.insert({a.layer, a.index});
      }
    }
    for (const auto& p : positive)
      if (negative.count(p)) return true;
    return false;
  }

  std::string name(std::size_t layer, std::size_t node) const {
    if (head_predicate_ && head_predicate_->layer == layer && head_predicate_->node == node) return std::string(head_);
    auto it = options_.names.find({layer, node});
    if (it != options_.names.end()) return it->second;
    return "h" + std::to_string(layer) + "_" + std::to_string(node);
  }

  std::string atom_text(const Atom& a) const {
    switch (a.kind) {
      case Atom::Kind::Literal: return net_.schema().literal_name(a.index);
      case Atom::Kind::Predicate: return name(a.layer, a.index);
      case Atom::Kind::NotPredicate: return "not " + name(a.layer, a.index);
    }
    return {};
  }

  const Predicate* find(std::size_t layer, std::size_t node) const {
    for (const auto& p : predicates_)
      if (p.layer == layer && p.node == node) return &p;
    return nullptr;
  }

  std::string render(const Resolved& output) const {
    std::ostringstream out;
    if (std::holds_alternative<True>(output)) {
      out << head_ << ".\n";
      return out.str();
    }
    if (std::holds_alternative<False>(output) || !head_predicate_) {
      out << "% " << head_ << ": empty rule set (never true)\n";
      return out.str();
    }

    // Collect predicates reachable from the head, then print them bottom-up.
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::function<void(const std::vector<Body>&)> visit = [&](const std::vector<Body>& rules) {
      for (const auto& body : rules)
        for (const auto& a : body) {
          if (a.kind == Atom::Kind::Literal) continue;
          if (used.insert({a.layer, a.index}).second)
            if (const Predicate* p = find(a.layer, a.index)) visit(p->rules);
        }
    };
    visit(head_predicate_->rules);

    bool first_block = true;
    auto emit = [&](const Predicate& p) {
      if (!first_block) out << '\n';
      first_block = false;
      const std::string head = name(p.layer, p.node);
      for (const auto& body : p.rules) {
        out << head << " :- ";
        for (std::size_t i = 0; i < body.size(); ++i) out << (i ? ", " : "") << atom_text(body[i]);
        out << ".\n";
      }
    };
    for (const auto& p : predicates_)
      if (used.count({p.layer, p.node})) emit(p);
    emit(*head_predicate_);
    return out.str();
  }

  const RuleNetwork& net_;
  std::string_view head_;
  const StructuredOptions& options_;
  std::vector<BitMatrix> tables_;
  std::vector<Predicate> predicates_;
  std::optional<Predicate> head_predicate_;
};

}  // namespace

std::string to_prolog_structured(const RuleNetwork& net, std::string_view head, const StructuredOptions& options) {
  return StructuredExporter(net, head, options).run();
}

}  // namespace deeprules
