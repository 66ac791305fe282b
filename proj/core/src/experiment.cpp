#include "deeprules/experiment.hpp"

#include <algorithm>
#include <sstream>

#include "deeprules/dataset_io.hpp"
#include "deeprules/errors.hpp"
#include "deeprules/stats.hpp"

namespace deeprules {
namespace {

ModelSpec make_spec(std::string id, std::string name, std::vector<std::size_t> sizes, double l, double p) {
  ModelSpec spec;
  spec.id = std::move(id);
  spec.name = std::move(name);
  spec.network.hidden_sizes = std::move(sizes);
  spec.network.avg_rule_length = l;
  spec.network.init_probability = p;
  return spec;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t s : sizes) out += (out.empty() ? "" : "x") + std::to_string(s);
  return out;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

bool is_degenerate(const TrainedModel& model, const OneHotDataset& data) {
  const std::size_t positives = predict(model.net, data.x).count();
  return positives == 0 || positives == data.size();
}

}  // namespace

ModelSpec preset(std::string_view id) {
  if (id == "drnc5") return make_spec("drnc5", "DRNC(5)", {32, 16, 8, 4, 2}, 2.0, 0.05);
  if (id == "drnc3") return make_spec("drnc3", "DRNC(3)", {32, 8, 2}, 3.0, 0.05);
  if (id == "rnc") return make_spec("rnc", "RNC", {20}, 5.0, 0.05);
  throw std::invalid_argument("unknown preset '" + std::string(id) + "' (expected drnc5, drnc3 or rnc)");
}

std::vector<ModelSpec> default_presets() { return {preset("drnc5"), preset("drnc3"), preset("rnc")}; }

Split stratified_split(const BitVector& y, Rng& rng) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < y.size(); ++r) by_class[y.get(r) ? 1 : 0].push_back(r);
  Split split;
  std::size_t next = 0;
  for (int c : {1, 0}) {
    rng.shuffle(std::span<std::size_t>(by_class[c]));
    for (std::size_t r : by_class[c]) {
      split.folds[next].push_back(r);
      next ^= 1;
    }
  }
  for (auto& f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

TrainedModel train_model(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed) {
  TrainedModel model;
  model.seed = seed;
  NetworkConfig config = spec.network;
  config.seed = derive_seed(seed, "init");
  model.net = initialize(config, data.schema);
  TrainParams params = spec.train;
  params.shuffle_seed = derive_seed(seed, "shuffle");
  model.fit = fit(model.net, data.x, data.y, params);
  return model;
}

RetryResult retry_on_degenerate(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed,
                                std::size_t max_attempts, const Trainer& trainer) {
  if (max_attempts == 0) throw std::invalid_argument("retry_on_degenerate: max_attempts must be positive");
  RuleNetwork last;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    TrainedModel model = trainer(spec, data, attempt_seed(seed, attempt));
    if (!is_degenerate(model, data)) return {std::move(model), attempt};
    last = std::move(model.net);
  }
  throw DegenerateModelError(spec.name + " predicted a single class after " + std::to_string(max_attempts) +
                                 " attempts",
                             std::move(last), max_attempts);
}

CvResult cross_validate(const ModelSpec& spec, const OneHotDataset& data, const Split& split, std::uint64_t seed,
                        const CvOptions& options) {
  const std::size_t positives = data.y.count();
  if (positives == 0 || positives == data.size())
    throw std::invalid_argument("cross_validate: dataset '" + data.provenance + "' has a single class");
  CvResult result;
  for (std::size_t f = 0; f < 2; ++f) {
    const OneHotDataset train = data.subset(split.folds[1 - f]);
    const OneHotDataset test = data.subset(split.folds[f]);
    RetryResult r = retry_on_degenerate(spec, train, derive_seed(seed, static_cast<std::uint64_t>(f)),
                                        options.max_attempts, options.trainer);
    result.fold_accuracy[f] = accuracy(test.y, predict(r.model.net, test.x));
    result.retries += r.retries;
    result.traces[f] = std::move(r.model.fit.trace);
  }
  result.mean_accuracy = (result.fold_accuracy[0] + result.fold_accuracy[1]) / 2.0;
  return result;
}

CvResult cross_validate(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed,
                        const CvOptions& options) {
  Rng rng(derive_seed(seed, "split"));
  return cross_validate(spec, data, stratified_split(data.y, rng), seed, options);
}

std::vector<std::vector<double>> ExperimentResult::accuracy_table() const {
  std::vector<std::vector<double>> table;
  for (const auto& row : cells) {
    std::vector<double> accs;
    for (const auto& c : row) accs.push_back(c.mean_accuracy);
    table.push_back(std::move(accs));
  }
  return table;
}

std::vector<double> ExperimentResult::average_accuracy() const {
  std::vector<double> avg(models.size(), 0.0);
  if (cells.empty()) return avg;
  for (const auto& row : cells)
    for (std::size_t m = 0; m < row.size(); ++m) avg[m] += row[m].mean_accuracy;
  for (double& a : avg) a /= static_cast<double>(cells.size());
  return avg;
}

std::vector<double> ExperimentResult::average_ranks() const { return deeprules::average_ranks(accuracy_table()); }

std::vector<std::vector<double>> ExperimentResult::mean_learning_curves() const {
  std::vector<std::vector<double>> curves(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    std::vector<double> sum;
    std::vector<std::size_t> count;
    for (const auto& row : cells) {
      for (const auto& trace : row[m].traces) {
        if (trace.size() > sum.size()) {
          sum.resize(trace.size(), 0.0);
          count.resize(trace.size(), 0);
        }
        for (std::size_t t = 0; t < trace.size(); ++t) {
          sum[t] += trace[t].train_accuracy;
          ++count[t];
        }
      }
    }
    for (std::size_t t = 0; t < sum.size(); ++t) curves[m].push_back(sum[t] / static_cast<double>(count[t]));
  }
  return curves;
}

ExperimentResult run_experiment(const std::vector<NamedDataset>& datasets, const std::vector<ModelSpec>& models,
                                const ExperimentOptions& options) {
  for (std::size_t a = 0; a < models.size(); ++a)
    for (std::size_t b = a + 1; b < models.size(); ++b)
      if (models[a].id == models[b].id) throw std::invalid_argument("duplicate model id '" + models[a].id + "'");
  for (std::size_t a = 0; a < datasets.size(); ++a)
    for (std::size_t b = a + 1; b < datasets.size(); ++b)
      if (datasets[a].id == datasets[b].id)
        throw std::invalid_argument("duplicate dataset id '" + datasets[a].id + "'");

  ExperimentResult result;
  result.models = models;
  for (const auto& d : datasets) {
    const std::uint64_t dataset_seed = derive_seed(options.master_seed, d.id);
    Rng split_rng(derive_seed(dataset_seed, "split"));
    Split split = stratified_split(d.data.y, split_rng);
    std::vector<CvResult> row;
    for (const auto& spec : models) {
      row.push_back(cross_validate(spec, d.data, split, derive_seed(dataset_seed, spec.id), options.cv));
      if (options.progress) options.progress(d.id, spec.name, row.back());
    }
    result.datasets.push_back(d.id);
    result.positive_ratio.push_back(d.data.positive_ratio());
    result.splits.push_back(std::move(split));
    result.cells.push_back(std::move(row));
  }
  return result;
}

std::vector<std::uint64_t> default_concept_seeds() {
  return {5, 16, 19, 24, 36, 44, 53, 57, 60, 65, 68, 69, 70, 81, 82, 85, 89, 107, 112, 118};
}

ExperimentResult run_artificial_suite(const std::vector<std::uint64_t>& seeds, const std::vector<ModelSpec>& models,
                                      const ExperimentOptions& options, const ConceptOptions& concept_options) {
  std::vector<NamedDataset> datasets;
  for (std::uint64_t s : seeds) datasets.push_back({std::to_string(s), generate_concept(s, concept_options).data});
  return run_experiment(datasets, models, options);
}

ExperimentResult run_uci_suite(const std::vector<std::filesystem::path>& paths, const std::vector<ModelSpec>& models,
                               const ExperimentOptions& options) {
  std::vector<NamedDataset> datasets;
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) throw FileError("dataset not found: '" + p.string() + "'");
    datasets.push_back({p.stem().string(), load_dataset(p)});
  }
  return run_experiment(datasets, models, options);
}

std::vector<ModelSpec> deep_grid() {
  const std::vector<std::vector<std::size_t>> structures = {{72, 36, 12, 6, 2}, {32, 16, 8, 4, 2}, {36, 12, 6, 2},
                                                            {16, 8, 4, 2},      {12, 6, 2},        {8, 4, 2}};
  std::vector<ModelSpec> grid;
  for (const auto& s : structures)
    for (double l : {1.0, 2.0, 3.0})
      for (double p : {0.025, 0.075, 0.125}) {
        const std::string id = "deep-" + join_sizes(s) + "-l" + format_number(l) + "-p" + format_number(p);
        ModelSpec spec = make_spec(id, id, s, l, p);
        spec.train.n_epochs = 1;
        grid.push_back(std::move(spec));
      }
  return grid;
}

std::vector<ModelSpec> shallow_grid() {
  std::vector<ModelSpec> grid;
  for (std::size_t s : {10, 20, 50, 100, 200, 500})
    for (int l = 1; l <= 7; ++l) {
      const std::string id = "shallow-" + std::to_string(s) + "-l" + std::to_string(l);
      ModelSpec spec = make_spec(id, id, {s}, l, 0.05);
      spec.train.n_epochs = 1;
      grid.push_back(std::move(spec));
    }
  return grid;
}

std::vector<GridRow> grid_search(const std::vector<NamedDataset>& datasets, const std::vector<ModelSpec>& grid,
                                 const ExperimentOptions& options) {
  const ExperimentResult result = run_experiment(datasets, grid, options);
  const auto averages = result.average_accuracy();
  std::vector<GridRow> rows;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    GridRow row;
    row.spec = grid[m];
    for (const auto& cells : result.cells) row.accuracies.push_back(cells[m].mean_accuracy);
    row.mean_accuracy = averages[m];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace deeprules
