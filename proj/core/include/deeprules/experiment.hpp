#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deeprules/concept.hpp"
#include "deeprules/network.hpp"
#include "deeprules/random.hpp"
#include "deeprules/schema.hpp"
#include "deeprules/training.hpp"

namespace deeprules {

/// A named model configuration. `id` is a file-name-safe key (drnc5),
/// `name` the display name (DRNC(5)).
struct ModelSpec {
  std::string id;
  std::string name;
  NetworkConfig network;
  TrainParams train;
};

/// drnc5: [32,16,8,4,2], l=2, p=0.05. drnc3: [32,8,2], l=3, p=0.05.
/// rnc: [20], l=5. All train 5 epochs with batches of 50 and unbounded flips.
ModelSpec preset(std::string_view id);
/// The three presets in report column order.
std::vector<ModelSpec> default_presets();

/// Two disjoint folds that together hold every row. Each class is shuffled
/// and dealt alternately, so both folds see both classes whenever each class
/// has at least two rows. Indices are sorted within a fold.
struct Split {
  std::vector<std::size_t> folds[2];
};
Split stratified_split(const BitVector& y, Rng& rng);

struct TrainedModel {
  RuleNetwork net;
  FitResult fit;
  std::uint64_t seed = 0;
};

/// Initializes spec.network from `seed` and fits it to `data`.
using Trainer = std::function<TrainedModel(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed)>;
TrainedModel train_model(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed);

/// Every attempt predicted a single class on its training data.
class DegenerateModelError : public std::runtime_error {
 public:
  DegenerateModelError(const std::string& message, RuleNetwork last, std::size_t attempts)
      : std::runtime_error(message), last_(std::move(last)), attempts_(attempts) {}
  const RuleNetwork& last_network() const noexcept { return last_; }
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  RuleNetwork last_;
  std::size_t attempts_;
};

struct RetryResult {
  TrainedModel model;
  std::size_t retries = 0;  // re-initializations after the first attempt
};

/// Trains with `seed`; while the result predicts one class for all of
/// `data`, re-initializes with the next attempt seed. Makes at most
/// `max_attempts` attempts in total, then throws DegenerateModelError.
RetryResult retry_on_degenerate(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed,
                                std::size_t max_attempts, const Trainer& trainer = train_model);

struct CvOptions {
  std::size_t max_attempts = 10;
  Trainer trainer = train_model;
};

struct CvResult {
  double fold_accuracy[2] = {0.0, 0.0};  // accuracy on fold f after training on the other fold
  double mean_accuracy = 0.0;
  std::size_t retries = 0;
  std::vector<TraceRecord> traces[2];  // training traces, indexed like fold_accuracy
};

/// 1x2-fold cross-validation on `split`. Each half is trained with a seed
/// derived from `seed` and the fold index.
/// Throws std::invalid_argument when `data` holds a single class.
CvResult cross_validate(const ModelSpec& spec, const OneHotDataset& data, const Split& split, std::uint64_t seed,
                        const CvOptions& options = {});
/// Same, on stratified_split with a seed derived from `seed`.
CvResult cross_validate(const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed,
                        const CvOptions& options = {});

struct NamedDataset {
  std::string id;
  OneHotDataset data;
};

struct ExperimentResult {
  std::vector<std::string> datasets;
  std::vector<ModelSpec> models;
  std::vector<double> positive_ratio;     // per dataset
  std::vector<Split> splits;              // per dataset, shared by every model
  std::vector<std::vector<CvResult>> cells;  // [dataset][model]

  /// Mean accuracies, datasets x models.
  std::vector<std::vector<double>> accuracy_table() const;
  std::vector<double> average_accuracy() const;
  std::vector<double> average_ranks() const;
  /// Per model: mean full-training accuracy at each trace step over all
  /// datasets and folds that reached that step.
  std::vector<std::vector<double>> mean_learning_curves() const;
};

using Progress = std::function<void(const std::string& dataset, const std::string& model, const CvResult& result)>;

struct ExperimentOptions {
  std::uint64_t master_seed = 0;
  CvOptions cv;
  Progress progress;
};

/// Cross-validates every model on every dataset. The split of a dataset
/// depends only on (master seed, dataset id); the training seeds of a cell
/// only on (master seed, dataset id, model id).
ExperimentResult run_experiment(const std::vector<NamedDataset>& datasets, const std::vector<ModelSpec>& models,
                                const ExperimentOptions& options = {});

/// The twenty concept seeds of the artificial benchmark, in report order.
std::vector<std::uint64_t> default_concept_seeds();

/// Generates one concept per seed (dataset id = the seed) and runs the models.
ExperimentResult run_artificial_suite(const std::vector<std::uint64_t>& seeds, const std::vector<ModelSpec>& models,
                                      const ExperimentOptions& options = {},
                                      const ConceptOptions& concept_options = {});

/// Loads each CSV (dataset id = file stem) and runs the models.
/// Throws FileError for a missing file.
ExperimentResult run_uci_suite(const std::vector<std::filesystem::path>& paths, const std::vector<ModelSpec>& models,
                               const ExperimentOptions& options = {});

/// Hyperparameter grids. Deep: six structures x l in {1,2,3} x p in {0.025, 0.075,
/// 0.125}. Shallow: s1 in {10,20,50,100,200,500} x l in 1..7. One epoch.
std::vector<ModelSpec> deep_grid();
std::vector<ModelSpec> shallow_grid();

struct GridRow {
  ModelSpec spec;
  std::vector<double> accuracies;  // per dataset, mean over folds
  double mean_accuracy = 0.0;
};

std::vector<GridRow> grid_search(const std::vector<NamedDataset>& datasets, const std::vector<ModelSpec>& grid,
                                 const ExperimentOptions& options = {});

}  // namespace deeprules
