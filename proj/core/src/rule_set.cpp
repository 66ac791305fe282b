#include "deeprules/rule_set.hpp"

#include <algorithm>
#include <sstream>

#include "deeprules/errors.hpp"

namespace deeprules {

bool RuleSet::evaluate(std::span<const Word> row) const {
  for (const auto& conj : rules) {
    bool fires = true;
    for (std::size_t c : conj) {
      if (c / kWordBits >= row.size() || !((row[c / kWordBits] >> (c % kWordBits)) & 1U)) {
        fires = false;
        break;
      }
    }
    if (fires) return true;
  }
  return false;
}

BitVector RuleSet::evaluate(const BitMatrix& x) const {
  BitVector out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.set(r, evaluate(x.row(r)));
  return out;
}

namespace {

using Term = std::vector<Word>;

std::size_t popcount(const Term& t) {
  std::size_t n = 0;
  for (Word w : t) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool subset_of(const Term& small, const Term& big) {
  for (std::size_t i = 0; i < small.size(); ++i)
    if (small[i] & ~big[i]) return false;
  return true;
}

class TermAlgebra {
 public:
  explicit TermAlgebra(const Schema& schema) : words_(words_for(schema.literal_count())) {
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      Term mask(words_, 0);
      const std::size_t first = schema.first_column(a);
      for (std::size_t v = 0; v < schema.attributes()[a].values.size(); ++v) {
        const std::size_t c = first + v;
        mask[c / kWordBits] |= Word{1} << (c % kWordBits);
      }
      masks_.push_back(std::move(mask));
    }
  }

  std::size_t words() const noexcept { return words_; }

  bool contradictory(const Term& t) const {
    for (const auto& mask : masks_) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < words_; ++i) n += static_cast<std::size_t>(std::popcount(t[i] & mask[i]));
      if (n > 1) return true;
    }
    return false;
  }

  /// Removes duplicates and supersets; result sorted by (size, words).
  static void absorb(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      const auto pa = popcount(a), pb = popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    std::vector<Term> kept;
    kept.reserve(terms.size());
    for (auto& t : terms) {
      bool absorbed = false;
      for (const auto& k : kept) {
        if (subset_of(k, t)) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed) kept.push_back(std::move(t));
    }
    terms = std::move(kept);
  }

 private:
  std::size_t words_;
  std::vector<Term> masks_;
};

Conjunction to_conjunction(const Term& t) {
  Conjunction c;
  for (std::size_t w = 0; w < t.size(); ++w)
    for (Word bits = t[w]; bits != 0; bits &= bits - 1)
      c.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
  return c;
}

}  // namespace

RuleSet normalize(RuleSet rules, const Schema& schema) {
  TermAlgebra algebra(schema);
  std::vector<Term> terms;
  for (const auto& conj : rules.rules) {
    Term t(algebra.words(), 0);
    for (std::size_t c : conj) {
      if (c >= schema.literal_count()) throw std::invalid_argument("rule literal out of range");
      t[c / kWordBits] |= Word{1} << (c % kWordBits);
    }
    if (!algebra.contradictory(t)) terms.push_back(std::move(t));
  }
  TermAlgebra::absorb(terms);
  RuleSet out;
  for (const auto& t : terms) out.rules.push_back(to_conjunction(t));
  return out;
}

RuleSet extract_dnf(const RuleNetwork& net, const ExtractOptions& options) {
  const Schema& schema = net.schema();
  TermAlgebra algebra(schema);
  const std::size_t words = algebra.words();

  // DNF of each node in the current layer; inputs start as single literals.
  std::vector<std::vector<Term>> current(net.input_size());
  for (std::size_t j = 0; j < net.input_size(); ++j) {
    Term t(words, 0);
    t[j / kWordBits] |= Word{1} << (j % kWordBits);
    current[j].push_back(std::move(t));
  }

  for (std::size_t i = 0; i < net.weight_layer_count(); ++i) {
    const BitMatrix& w = net.weights(i);
    const bool conjunctive = RuleNetwork::is_conjunctive_target(i);
    std::vector<std::vector<Term>> next(w.cols());
    for (std::size_t k = 0; k < w.cols(); ++k) {
      std::vector<Term> acc;
      if (conjunctive) acc.push_back(Term(words, 0));  // empty conjunction: true
      for (std::size_t j = 0; j < w.rows(); ++j) {
        if (!w.get(j, k)) continue;
        const auto& input = current[j];
        if (conjunctive) {
          if (acc.size() * input.size() > options.term_budget)
            throw ResourceLimitError("DNF expansion of layer " + std::to_string(i + 1) + " node " +
                                     std::to_string(k) + " exceeds the term budget of " +
                                     std::to_string(options.term_budget));
          std::vector<Term> product;
          product.reserve(acc.size() * input.size());
          for (const auto& a : acc) {
            for (const auto& b : input) {
              Term t(words);
              for (std::size_t x = 0; x < words; ++x) t[x] = a[x] | b[x];
              if (!algebra.contradictory(t)) product.push_back(std::move(t));
            }
          }
          TermAlgebra::absorb(product);
          acc = std::move(product);
          if (acc.empty()) break;  // false
        } else {
          if (acc.size() + input.size() > options.term_budget)
            throw ResourceLimitError("DNF expansion of layer " + std::to_string(i + 1) + " node " +
                                     std::to_string(k) + " exceeds the term budget of " +
                                     std::to_string(options.term_budget));
          acc.insert(acc.end(), input.begin(), input.end());
        }
      }
      TermAlgebra::absorb(acc);
      next[k] = std::move(acc);
    }
    current = std::move(next);
  }

  RuleSet out;
  for (const auto& t : current.at(0)) out.rules.push_back(to_conjunction(t));
  return out;
}

std::string to_prolog(const RuleSet& rules, const Schema& schema, std::string_view head) {
  std::ostringstream out;
  if (rules.empty()) {
    out << "% " << head << ": empty rule set (never true)\n";
    return out.str();
  }
  for (const auto& conj : rules.rules) {
    out << head;
    if (conj.empty()) {
      out << ".\n";
      continue;
    }
    out << " :- ";
    for (std::size_t i = 0; i < conj.size(); ++i) {
      if (i) out << ", ";
      out << schema.literal_name(conj[i]);
    }
    out << ".\n";
  }
  return out.str();
}

}  // namespace deeprules
