// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/concept.hpp"
#include "deeprules/dataset_io.hpp"
#include "deeprules/experiment.hpp"
#include "deeprules/fixtures.hpp"
#include "deeprules/rule_set.hpp"
#include "deeprules/stats.hpp"
#include "deeprules/training.hpp"
#include "oracles.hpp"

using namespace deeprules;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.ok) ++failures;
  std::printf("%s %s (%.2fs): %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome parity() {
  const auto start = Clock::now();
  const RuleNetwork net = fixtures::parity_network();
  const BitMatrix x = net.schema().enumerate_assignments();
  const BitVector y = predict(net, x);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < x.rows(); ++r)
    wrong += y.get(r) != fixtures::parity_oracle(x.get(r, 0), x.get(r, 2), x.get(r, 4), x.get(r, 6), x.get(r, 8));
  const RuleSet rules = extract_dnf(net);
  bool all_five = true;
  for (const auto& c : rules.rules) all_five = all_five && c.size() == 5;
  const double t = seconds_since(start);
  const bool ok = x.rows() == 32 && wrong == 0 && rules.size() == 16 && all_five && t < 1.0;
  return {ok, std::to_string(wrong) + " wrong of " + std::to_string(x.rows()) + ", " + std::to_string(rules.size()) +
                  " conjunctions" + (all_five ? " of 5 literals" : " (not all of length 5)")};
}

Outcome hierarchical() {
  const auto start = Clock::now();
  const RuleNetwork net = fixtures::hierarchical_concept_network();
  const BitMatrix x = net.schema().enumerate_assignments();
  const BitVector deep = predict(net, x);
  const BitVector flat = fixtures::flat_concept_rules().evaluate(x);
  std::size_t diff = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) diff += deep.get(r) != flat.get(r);
  const double t = seconds_since(start);
  return {x.rows() == 1024 && diff == 0 && t < 1.0,
          std::to_string(diff) + " disagreements on " + std::to_string(x.rows()) + " inputs"};
}

BitMatrix naive_multiply(const BitMatrix& a, const BitMatrix& w) {
  BitMatrix out(a.rows(), w.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      bool v = false;
      for (std::size_t t = 0; t < a.cols(); ++t) v = v || (a.get(i, t) && w.get(t, j));
      out.set(i, j, v);
    }
  return out;
}

BitMatrix from_bits(std::size_t rows, std::size_t cols, std::uint64_t bits) {
  BitMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i)
    if ((bits >> i) & 1) m.set(i / cols, i % cols, true);
  return m;
}

Outcome kernel() {
  std::size_t exhaustive = 0, mismatches = 0;
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t c = 1; c <= 3; ++c)
        for (std::uint64_t ab = 0; ab < (std::uint64_t{1} << (r * m)); ++ab) {
          const BitMatrix a = from_bits(r, m, ab);
          for (std::uint64_t wb = 0; wb < (std::uint64_t{1} << (m * c)); ++wb) {
            const BitMatrix w = from_bits(m, c, wb);
            mismatches += !(bool_multiply(a, w) == naive_multiply(a, w));
            ++exhaustive;
          }
        }
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t r = 1 + rng.index(64), m = 1 + rng.index(64), c = 1 + rng.index(64);
    const double density = rng.uniform() * 0.5;
    BitMatrix a(r, m), w(m, c);
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t q = 0; q < m; ++q) a.set(p, q, rng.bernoulli(density));
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < c; ++q) w.set(p, q, rng.bernoulli(density));
    mismatches += !(bool_multiply(a, w) == naive_multiply(a, w));
  }
  return {mismatches == 0, std::to_string(exhaustive) + " exhaustive + 10000 random products, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome statistics() {
  const double cd95 = nemenyi_cd(3, 20, 0.05);
  const double cd90 = nemenyi_cd(3, 20, 0.10);
  const FriedmanResult f = friedman_from_ranks(std::vector<double>{1.775, 1.725, 2.5}, 20, 0.05);
  const bool ok = std::abs(cd95 - 0.741) <= 0.001 && std::abs(cd90 - 0.649) <= 0.001 && f.significant;
  return {ok, "CD " + fmt("%.4f", cd95) + " / " + fmt("%.4f", cd90) + ", chi2 " + fmt("%.3f", f.statistic) +
                  " vs critical " + fmt("%.3f", f.critical_value)};
}

Outcome deep_vs_shallow() {
  const auto start = Clock::now();
  const ExperimentResult r = run_artificial_suite(default_concept_seeds(), default_presets());
  const auto table = r.accuracy_table();
  const auto mean = r.average_accuracy();
  const double expected[3] = {0.9467, 0.9502, 0.9386};
  std::size_t wins5 = 0, wins3 = 0;
  std::printf("  %-8s %6s %8s %8s %8s\n", "dataset", "%(+)", "DRNC(5)", "DRNC(3)", "RNC");
  for (std::size_t d = 0; d < table.size(); ++d) {
    std::printf("  %-8s %6.4f %8.4f %8.4f %8.4f\n", r.datasets[d].c_str(), r.positive_ratio[d], table[d][0],
                table[d][1], table[d][2]);
    wins5 += table[d][0] > table[d][2];
    wins3 += table[d][1] > table[d][2];
  }
  std::printf("  %-8s %6s %8.4f %8.4f %8.4f\n", "mean", "", mean[0], mean[1], mean[2]);
  bool in_band = true;
  for (int m = 0; m < 3; ++m) in_band = in_band && std::abs(mean[m] - expected[m]) <= 0.03;
  const bool ok = in_band && mean[0] > mean[2] && mean[1] > mean[2] && wins5 >= 12 && wins3 >= 12 &&
                  seconds_since(start) <= 7200;
  std::ostringstream d;
  d << "means " << fmt("%.4f", mean[0]) << " / " << fmt("%.4f", mean[1]) << " / " << fmt("%.4f", mean[2])
    << (in_band ? " within" : " outside") << " +-0.03 of 0.9467 / 0.9502 / 0.9386; wins vs RNC " << wins5
    << "/20 (DRNC(5)), " << wins3 << "/20 (DRNC(3))";
  return {ok, d.str()};
}

Outcome monotonicity() {
  Rng rng(77);
  const std::vector<std::vector<std::size_t>> shapes = {{8, 4, 2}, {32, 16, 8, 4, 2}, {16, 8, 2}, {12}};
  std::size_t violations = 0, flips = 0, fit_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Schema schema = Schema::booleans(4 + rng.index(7));
    const BitMatrix x = oracle::random_rows(schema, 40 + rng.index(160), rng);
    BitVector y(x.rows());
    const double bias = 0.2 + 0.6 * rng.uniform();
    for (std::size_t r = 0; r < y.size(); ++r) y.set(r, rng.bernoulli(bias));
    NetworkConfig cfg;
    cfg.hidden_sizes = shapes[trial % shapes.size()];
    cfg.avg_rule_length = 1 + rng.index(3);
    cfg.init_probability = 0.05 + 0.2 * rng.uniform();
    cfg.seed = rng.next();
    RuleNetwork net = initialize(cfg, schema);

    std::vector<std::size_t> batch;
    for (std::size_t r = 0; r < x.rows(); ++r)
      if (rng.bernoulli(0.5)) batch.push_back(r);
    RuleNetwork opt = net;
    const OptimizeResult o = optimize_coefs(opt, x, y, batch);
    flips += o.flips;
    for (std::size_t i = 1; i < o.correct_history.size(); ++i)
      violations += o.correct_history[i] <= o.correct_history[i - 1];

    TrainParams params;
    params.n_epochs = 2;
    params.batch_size = 25;
    params.shuffle_seed = rng.next();
    const FitResult f = fit(net, x, y, params);
    fit_violations += f.final_accuracy < f.initial_accuracy;
    fit_violations += accuracy(y, predict(net, x)) != f.final_accuracy;
  }
  return {violations == 0 && fit_violations == 0,
          std::to_string(flips) + " permanent flips, " + std::to_string(violations) + " non-increasing steps, " +
              std::to_string(fit_violations) + " fit regressions"};
}

std::string concept_bytes(const Concept& c, const std::filesystem::path& dir) {
  std::ostringstream csv;
  write_dataset_csv(c.data, csv);
  DatasetMetadata meta{c.seed, c.generator_seed, c.attempts, 10, c.data.positive_ratio(), c.minimized.size(), "1"};
  const auto path = dir / "meta.json";
  write_metadata(path, meta);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream m;
  m << in.rdbuf();
  return csv.str() + "\n--\n" + m.str();
}

Outcome generation() {
  const auto dir = std::filesystem::temp_directory_path() / "deeprules_acceptance_gen";
  std::filesystem::create_directories(dir);
  std::size_t bad = 0, differ = 0;
  double min_ratio = 1, max_ratio = 0;
  std::size_t max_rules = 0;
  for (std::uint64_t seed : default_concept_seeds()) {
    const Concept c = generate_concept(seed);
    const double ratio = c.data.positive_ratio();
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    max_rules = std::max(max_rules, c.minimized.size());
    bad += ratio < 0.2 || ratio > 0.8 || c.minimized.size() > 20;
    const std::string first = concept_bytes(c, dir);
    const DatasetMetadata stored = read_metadata(dir / "meta.json");
    differ += concept_bytes(generate_concept(stored.seed), dir) != first;
  }
  std::filesystem::remove_all(dir);
  return {bad == 0 && differ == 0, "ratios in [" + fmt("%.3f", min_ratio) + ", " + fmt("%.3f", max_ratio) +
                                       "], at most " + std::to_string(max_rules) + " rules, " +
                                       std::to_string(differ) + " regenerations differ"};
}

Outcome uci() {
  const auto start = Clock::now();
  const std::filesystem::path dir = std::filesystem::path(DEEPRULES_DATA_DIR) / "uci";
  const ExperimentResult r = run_uci_suite({dir / "tic-tac-toe.csv", dir / "vote.csv"}, default_presets());
  const auto table = r.accuracy_table();
  const double floors[2] = {0.85, 0.88};
  bool ok = seconds_since(start) <= 600;
  std::ostringstream d;
  for (std::size_t i = 0; i < 2; ++i) {
    d << r.datasets[i] << ":";
    for (std::size_t m = 0; m < table[i].size(); ++m) {
      d << " " << fmt("%.4f", table[i][m]);
      ok = ok && table[i][m] >= floors[i];
    }
    d << (i == 0 ? " (floor 0.85); " : " (floor 0.88)");
  }
  return {ok, d.str()};
}

}  // namespace

int main() {
  run("parity fixture", parity);
  run("hierarchical equivalence", hierarchical);
  run("kernel oracle", kernel);
  run("statistics", statistics);
  run("deep vs shallow", deep_vs_shallow);
  run("monotonicity", monotonicity);
  run("generation protocol", generation);
  run("uci smoke", uci);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
