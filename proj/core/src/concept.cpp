#include "deeprules/concept.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "deeprules/errors.hpp"
#include "deeprules/random.hpp"
#include "deeprules/training.hpp"

namespace deeprules {

OneHotDataset generate_inputs(std::size_t n_vars) {
  if (n_vars == 0 || n_vars > 20) throw std::invalid_argument("generate_inputs: n_vars must be in 1..20");
  OneHotDataset data;
  data.schema = Schema::booleans(n_vars);
  data.x = data.schema.enumerate_assignments(std::size_t{1} << 20);
  data.y = BitVector(data.x.rows());
  data.provenance = "inputs n_vars=" + std::to_string(n_vars);
  return data;
}

namespace {

// Implicants live in a ternary cube: digit a of an index is 0 (variable a
// false), 1 (true) or 2 (free).
struct Cube {
  std::size_t n;
  std::vector<std::size_t> pow3;

  explicit Cube(std::size_t vars) : n(vars), pow3(vars + 1, 1) {
    for (std::size_t a = 1; a <= vars; ++a) pow3[a] = pow3[a - 1] * 3;
  }
  std::size_t size() const { return pow3[n]; }
  std::size_t digit(std::size_t t, std::size_t a) const { return (t / pow3[a]) % 3; }

  // Truth-table row of a fully specified cube.
  std::size_t row_of(std::size_t t) const {
    std::size_t r = 0;
    for (std::size_t a = 0; a < n; ++a)
      if (digit(t, a) == 0) r |= std::size_t{1} << (n - 1 - a);
    return r;
  }

  std::vector<std::size_t> rows_covered(std::size_t t) const {
    std::vector<std::size_t> free;
    std::size_t base = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t d = digit(t, a);
      if (d == 2) free.push_back(n - 1 - a);
      else if (d == 0) base |= std::size_t{1} << (n - 1 - a);
    }
    std::vector<std::size_t> rows;
    rows.reserve(std::size_t{1} << free.size());
    for (std::size_t m = 0; m < (std::size_t{1} << free.size()); ++m) {
      std::size_t r = base;
      for (std::size_t b = 0; b < free.size(); ++b)
        if ((m >> b) & 1) r |= std::size_t{1} << free[b];
      rows.push_back(r);
    }
    return rows;
  }

  Conjunction conjunction(std::size_t t) const {
    Conjunction c;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t d = digit(t, a);
      if (d == 1) c.push_back(2 * a);
      else if (d == 0) c.push_back(2 * a + 1);
    }
    return c;
  }

  std::size_t literal_count(std::size_t t) const {
    std::size_t k = 0;
    for (std::size_t a = 0; a < n; ++a) k += digit(t, a) != 2;
    return k;
  }
};

}  // namespace

RuleSet minimize_dnf(const BitVector& labels, std::size_t n_vars) {
  if (n_vars > 12) throw std::invalid_argument("minimize_dnf: at most 12 variables");
  const std::size_t n_rows = std::size_t{1} << n_vars;
  if (labels.size() != n_rows)
    throw std::invalid_argument("minimize_dnf: expected a complete truth table of " + std::to_string(n_rows) +
                                " rows, got " + std::to_string(labels.size()));

  const Cube cube(n_vars);
  std::vector<char> implicant(cube.size(), 0);
  for (std::size_t t = 0; t < cube.size(); ++t) {
    std::size_t free_digit = n_vars;
    for (std::size_t a = 0; a < n_vars && free_digit == n_vars; ++a)
      if (cube.digit(t, a) == 2) free_digit = a;
    if (free_digit == n_vars) {
      implicant[t] = labels.get(cube.row_of(t));
    } else {
      const std::size_t p = cube.pow3[free_digit];
      implicant[t] = implicant[t - 2 * p] && implicant[t - p];
    }
  }

  std::vector<std::size_t> primes;
  for (std::size_t t = 0; t < cube.size(); ++t) {
    if (!implicant[t]) continue;
    bool prime = true;
    for (std::size_t a = 0; a < n_vars && prime; ++a) {
      const std::size_t d = cube.digit(t, a);
      if (d != 2 && implicant[t + (2 - d) * cube.pow3[a]]) prime = false;
    }
    if (prime) primes.push_back(t);
  }

  std::vector<std::vector<std::size_t>> covers(primes.size());
  std::vector<std::size_t> cover_count(n_rows, 0);
  std::vector<std::size_t> only_prime(n_rows, 0);
  for (std::size_t p = 0; p < primes.size(); ++p) {
    covers[p] = cube.rows_covered(primes[p]);
    for (std::size_t r : covers[p]) {
      ++cover_count[r];
      only_prime[r] = p;
    }
  }

  std::vector<char> chosen(primes.size(), 0);
  std::vector<char> covered(n_rows, 0);
  std::size_t remaining = labels.count();
  auto take = [&](std::size_t p) {
    chosen[p] = 1;
    for (std::size_t r : covers[p])
      if (!covered[r]) {
        covered[r] = 1;
        --remaining;
      }
  };
  for (std::size_t r = 0; r < n_rows; ++r)
    if (cover_count[r] == 1 && !chosen[only_prime[r]]) take(only_prime[r]);

  while (remaining > 0) {
    std::size_t best = primes.size();
    std::size_t best_gain = 0;
    for (std::size_t p = 0; p < primes.size(); ++p) {
      if (chosen[p]) continue;
      std::size_t gain = 0;
      for (std::size_t r : covers[p]) gain += !covered[r];
      if (gain > best_gain ||
          (gain == best_gain && gain > 0 && cube.literal_count(primes[p]) < cube.literal_count(primes[best]))) {
        best = p;
        best_gain = gain;
      }
    }
    take(best);
  }

  // Drop primes made redundant by later picks.
  std::vector<std::size_t> times_covered(n_rows, 0);
  for (std::size_t p = 0; p < primes.size(); ++p)
    if (chosen[p])
      for (std::size_t r : covers[p]) ++times_covered[r];
  for (std::size_t p = primes.size(); p-- > 0;) {
    if (!chosen[p]) continue;
    const bool redundant =
        std::all_of(covers[p].begin(), covers[p].end(), [&](std::size_t r) { return times_covered[r] > 1; });
    if (!redundant) continue;
    chosen[p] = 0;
    for (std::size_t r : covers[p]) --times_covered[r];
  }

  RuleSet rules;
  for (std::size_t p = 0; p < primes.size(); ++p)
    if (chosen[p]) rules.rules.push_back(cube.conjunction(primes[p]));
  return normalize(std::move(rules), Schema::booleans(n_vars));
}

std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt) {
  return attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
}

Concept generate_concept(std::uint64_t seed, const ConceptOptions& options) {
  if (options.max_attempts == 0) throw std::invalid_argument("generate_concept: max_attempts must be positive");
  const OneHotDataset inputs = generate_inputs(options.n_vars);
  const std::size_t n = inputs.size();

  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::uint64_t s = attempt_seed(seed, attempt);
    Rng rng(s);
    NetworkConfig config;
    config.hidden_sizes = options.hidden_sizes;
    config.avg_rule_length = options.avg_rule_length;
    config.init_probability = options.init_probability;
    config.seed = s;
    RuleNetwork net = initialize(config, inputs.schema, rng);

    const std::size_t positive = rng.index(n);
    std::size_t negative = rng.index(n - 1);
    if (negative >= positive) ++negative;
    BitVector target(n);
    target.set(positive, true);
    const std::size_t pair[] = {positive, negative};
    optimize_coefs(net, inputs.x, target, pair);

    BitVector labels = predict(net, inputs.x);
    const double ratio = static_cast<double>(labels.count()) / static_cast<double>(n);
    if (ratio < options.min_positive_ratio || ratio > options.max_positive_ratio) continue;
    RuleSet minimized = minimize_dnf(labels, options.n_vars);
    if (minimized.size() > options.max_rules) continue;

    Concept c;
    c.seed = seed;
    c.generator_seed = s;
    c.attempts = attempt + 1;
    c.network = std::move(net);
    c.data = inputs;
    c.data.y = std::move(labels);
    c.data.provenance = "concept seed=" + std::to_string(seed);
    c.minimized = std::move(minimized);
    return c;
  }
  throw GenerationError("no acceptable concept for seed " + std::to_string(seed) + " within " +
                        std::to_string(options.max_attempts) + " attempts");
}

}  // namespace deeprules
