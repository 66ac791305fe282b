#include <benchmark/benchmark.h>

#include "deeprules/bit_matrix.hpp"
#include "deeprules/concept.hpp"
#include "deeprules/evaluator.hpp"
#include "deeprules/experiment.hpp"
#include "deeprules/network.hpp"
#include "deeprules/random.hpp"
#include "deeprules/training.hpp"

using namespace deeprules;

namespace {

BitMatrix random_matrix(std::size_t rows, std::size_t cols, double density, Rng& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.bernoulli(density)) m.set(r, c, true);
  return m;
}

const Concept& concept19() {
  static const Concept c = generate_concept(19);
  return c;
}

}  // namespace

static void BM_BoolMultiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const BitMatrix a = random_matrix(1024, n, 0.5, rng);
  const BitMatrix w = random_matrix(n, n, 0.05, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bool_multiply(a, w));
}
BENCHMARK(BM_BoolMultiply)->Arg(20)->Arg(32)->Arg(128)->Arg(512);

static void BM_Predict(benchmark::State& state) {
  const Concept& c = concept19();
  const ModelSpec spec = preset(state.range(0) == 0 ? "drnc5" : "rnc");
  NetworkConfig cfg = spec.network;
  cfg.seed = 3;
  const RuleNetwork net = initialize(cfg, c.data.schema);
  for (auto _ : state) benchmark::DoNotOptimize(predict(net, c.data.x));
}
BENCHMARK(BM_Predict)->Arg(0)->Arg(1);

// One full scan over every candidate flip on a 50-row batch.
static void BM_FlipScan(benchmark::State& state) {
  const Concept& c = concept19();
  NetworkConfig cfg = preset("drnc5").network;
  cfg.seed = 5;
  RuleNetwork net = initialize(cfg, c.data.schema);
  std::vector<std::size_t> rows(50);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i * 20;
  BatchEvaluator eval(net, c.data.x, c.data.y, rows);
  const auto flips = enumerate_flips(net);
  for (auto _ : state) {
    std::size_t best = 0;
    for (const auto& f : flips) best = std::max(best, eval.score(f));
    benchmark::DoNotOptimize(best);
  }
  state.counters["flips"] = static_cast<double>(flips.size());
}
BENCHMARK(BM_FlipScan);

static void BM_Fit(benchmark::State& state) {
  const Concept& c = concept19();
  const ModelSpec spec = preset(state.range(0) == 0 ? "drnc5" : "rnc");
  for (auto _ : state) benchmark::DoNotOptimize(train_model(spec, c.data, 7).fit.final_accuracy);
}
BENCHMARK(BM_Fit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MinimizeDnf(benchmark::State& state) {
  const Concept& c = concept19();
  for (auto _ : state) benchmark::DoNotOptimize(minimize_dnf(c.data.y, 10).size());
}
BENCHMARK(BM_MinimizeDnf)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
