#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "deeprules/concept.hpp"
#include "deeprules/errors.hpp"
#include "deeprules/experiment.hpp"
#include "deeprules/report.hpp"

using namespace deeprules;

namespace {

// a and not c over ten boolean variables.
OneHotDataset single_rule_dataset() {
  OneHotDataset d = generate_inputs(10);
  for (std::size_t r = 0; r < d.size(); ++r) d.y.set(r, d.x.get(r, 0) && d.x.get(r, 5));
  return d;
}

ModelSpec quick(std::string id) {
  ModelSpec s = preset(id);
  s.train.n_epochs = 2;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Presets, ArchitecturesAndSchedule) {
  const auto presets = default_presets();
  ASSERT_EQ(presets.size(), 3u);
  EXPECT_EQ(presets[0].name, "DRNC(5)");
  EXPECT_EQ(presets[0].network.hidden_sizes, (std::vector<std::size_t>{32, 16, 8, 4, 2}));
  EXPECT_EQ(presets[1].network.hidden_sizes, (std::vector<std::size_t>{32, 8, 2}));
  EXPECT_EQ(presets[2].network.hidden_sizes, (std::vector<std::size_t>{20}));
  EXPECT_DOUBLE_EQ(presets[2].network.avg_rule_length, 5.0);
  for (const auto& p : presets) {
    EXPECT_EQ(p.train.n_epochs, 5u);
    EXPECT_EQ(p.train.batch_size, 50u);
  }
  EXPECT_THROW(preset("drnc9"), std::invalid_argument);
}

TEST(StratifiedSplit, DisjointExhaustiveAndBalanced) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(300);
    BitVector y(n);
    for (std::size_t r = 0; r < n; ++r) y.set(r, rng.bernoulli(0.3));
    Rng split_rng(static_cast<std::uint64_t>(trial));
    const Split s = stratified_split(y, split_rng);
    std::vector<std::size_t> all = s.folds[0];
    all.insert(all.end(), s.folds[1].begin(), s.folds[1].end());
    std::sort(all.begin(), all.end());
    for (std::size_t r = 0; r < n; ++r) ASSERT_EQ(all[r], r);
    std::size_t pos[2] = {0, 0};
    for (int f = 0; f < 2; ++f) {
      ASSERT_TRUE(std::is_sorted(s.folds[f].begin(), s.folds[f].end()));
      for (std::size_t r : s.folds[f]) pos[f] += y.get(r);
    }
    EXPECT_LE(std::max(pos[0], pos[1]) - std::min(pos[0], pos[1]), 1u);
    EXPECT_LE(std::max(s.folds[0].size(), s.folds[1].size()) - std::min(s.folds[0].size(), s.folds[1].size()), 2u);
  }
}

TEST(CrossValidate, LearnsASingleRule) {
  const OneHotDataset d = single_rule_dataset();
  const CvResult r = cross_validate(preset("drnc3"), d, 7);
  EXPECT_GE(r.mean_accuracy, 0.98);
  EXPECT_DOUBLE_EQ(r.mean_accuracy, (r.fold_accuracy[0] + r.fold_accuracy[1]) / 2);
  EXPECT_EQ(r.retries, 0u);
}

TEST(CrossValidate, DeterministicForASeed) {
  const Concept c = generate_concept(19);
  const CvResult a = cross_validate(quick("drnc5"), c.data, 11);
  const CvResult b = cross_validate(quick("drnc5"), c.data, 11);
  EXPECT_EQ(a.fold_accuracy[0], b.fold_accuracy[0]);
  EXPECT_EQ(a.fold_accuracy[1], b.fold_accuracy[1]);
  ASSERT_EQ(a.traces[0].size(), b.traces[0].size());
  for (std::size_t i = 0; i < a.traces[0].size(); ++i)
    EXPECT_EQ(a.traces[0][i].train_accuracy, b.traces[0][i].train_accuracy);
}

TEST(CrossValidate, TraceHasOneRecordPerBatch) {
  const Concept c = generate_concept(24);
  const ModelSpec spec = quick("rnc");
  const CvResult r = cross_validate(spec, c.data, 2);
  // 512 training rows per fold in batches of 50.
  EXPECT_EQ(r.traces[0].size(), spec.train.n_epochs * 11);
  EXPECT_EQ(r.traces[1].size(), spec.train.n_epochs * 11);
}

TEST(CrossValidate, SingleClassDatasetThrows) {
  OneHotDataset d = generate_inputs(4);
  EXPECT_THROW(cross_validate(preset("rnc"), d, 1), std::invalid_argument);
}

TEST(RetryOnDegenerate, NoRetriesForAHealthyModel) {
  const RetryResult r = retry_on_degenerate(preset("drnc3"), single_rule_dataset(), 5, 10);
  EXPECT_EQ(r.retries, 0u);
}

TEST(RetryOnDegenerate, StopsAfterTheAttemptBudget) {
  const OneHotDataset d = single_rule_dataset();
  std::vector<std::uint64_t> seeds;
  const Trainer constant = [&](const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed) {
    seeds.push_back(seed);
    // A single empty conjunction: true everywhere.
    RuleNetwork net(data.schema, {1});
    net.weights(1).set(0, 0, true);
    (void)spec;
    return TrainedModel{net, {}, seed};
  };
  try {
    retry_on_degenerate(preset("rnc"), d, 99, 4, constant);
    FAIL() << "degenerate model accepted";
  } catch (const DegenerateModelError& e) {
    EXPECT_EQ(e.attempts(), 4u);
  }
  ASSERT_EQ(seeds.size(), 4u);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(seeds[a], attempt_seed(99, a));
}

TEST(RetryOnDegenerate, CountsReinitializations) {
  const OneHotDataset d = single_rule_dataset();
  std::size_t calls = 0;
  const Trainer flaky = [&](const ModelSpec& spec, const OneHotDataset& data, std::uint64_t seed) {
    if (++calls < 3) {
      RuleNetwork net(data.schema, {1});
      net.weights(1).set(0, 0, true);
      return TrainedModel{net, {}, seed};
    }
    return train_model(spec, data, seed);
  };
  const RetryResult r = retry_on_degenerate(preset("drnc3"), d, 1, 10, flaky);
  EXPECT_EQ(r.retries, 2u);
}

TEST(Grids, SizesMatchTheSearchSpace) {
  const auto deep = deep_grid();
  const auto shallow = shallow_grid();
  EXPECT_EQ(deep.size(), 54u);
  EXPECT_EQ(shallow.size(), 42u);
  std::set<std::string> ids;
  for (const auto& s : deep) ids.insert(s.id);
  for (const auto& s : shallow) ids.insert(s.id);
  EXPECT_EQ(ids.size(), 96u);
  for (const auto& s : shallow) EXPECT_EQ(s.network.hidden_sizes.size(), 1u);
  for (const auto& s : deep) EXPECT_EQ(s.train.n_epochs, 1u);
}

TEST(Experiment, ReportsAreByteIdenticalAcrossRuns) {
  std::vector<ModelSpec> models = {quick("drnc5"), quick("drnc3"), quick("rnc")};
  ExperimentOptions o;
  o.master_seed = 5;
  const auto tmp = std::filesystem::temp_directory_path() / "deeprules_test_exp";
  std::filesystem::remove_all(tmp);
  const ExperimentResult a = run_artificial_suite({5, 16}, models, o);
  write_experiment_outputs(tmp / "a", a);
  write_experiment_outputs(tmp / "b", run_artificial_suite({5, 16}, models, o));
  for (const char* f : {"reports/report.csv", "reports/folds.csv", "reports/fold_indices.csv", "reports/summary.md",
                        "traces/drnc5.csv"}) {
    const std::string text = slurp(tmp / "a" / f);
    EXPECT_FALSE(text.empty()) << f;
    EXPECT_EQ(text, slurp(tmp / "b" / f)) << f;
  }
  const std::string report = slurp(tmp / "a" / "reports/report.csv");
  EXPECT_EQ(report.substr(0, report.find('\n')), "dataset,%(+),DRNC(5),DRNC(3),RNC");

  const ReportTable t = read_report_file(tmp / "a" / "reports/report.csv");
  EXPECT_EQ(t.datasets, (std::vector<std::string>{"5", "16"}));
  ASSERT_EQ(t.accuracies.size(), 2u);
  for (std::size_t d = 0; d < 2; ++d)
    for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(t.accuracies[d][m], a.accuracy_table()[d][m], 5e-5);
  std::filesystem::remove_all(tmp);
}

TEST(Experiment, SplitDependsOnlyOnDatasetAndMasterSeed) {
  ExperimentOptions o;
  o.master_seed = 9;
  const ExperimentResult one = run_artificial_suite({19}, {quick("rnc")}, o);
  const ExperimentResult two = run_artificial_suite({19}, {quick("drnc3"), quick("rnc")}, o);
  EXPECT_EQ(one.splits[0].folds[0], two.splits[0].folds[0]);
  EXPECT_EQ(one.cells[0][0].fold_accuracy[0], two.cells[0][1].fold_accuracy[0]);
}

TEST(Experiment, DuplicateDatasetIdsRejected) {
  const Concept c = generate_concept(5);
  EXPECT_THROW(run_experiment({{"x", c.data}, {"x", c.data}}, {quick("rnc")}), std::invalid_argument);
}

TEST(Experiment, MissingUciFileIsFileError) {
  EXPECT_THROW(run_uci_suite({"/nonexistent/vote.csv"}, {quick("rnc")}), FileError);
}

TEST(Report, MalformedRowsNameTheLine) {
  std::istringstream in("dataset,%(+),A,B\nx,0.5,0.9,0.8\ny,0.5,0.9\n");
  try {
    read_report_csv(in, "r.csv");
    FAIL() << "short row accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "r.csv:3");
  }
  std::istringstream bad_number("dataset,%(+),A,B,C\nx,0.5,0.9,abc,0.1\n");
  EXPECT_THROW(read_report_csv(bad_number), ParseError);
}

TEST(Report, StatsSummaryPrintsCriticalDistances) {
  ReportTable t;
  t.models = {"A", "B", "C"};
  for (int d = 0; d < 20; ++d) {
    t.datasets.push_back(std::to_string(d));
    t.positive_ratio.push_back(0.5);
    t.accuracies.push_back({0.9 + 0.001 * d, 0.9, 0.8});
  }
  const std::string s = stats_summary(t);
  EXPECT_NE(s.find("Nemenyi critical distance: 0.741 (95%), 0.649 (90%)"), std::string::npos) << s;
}

TEST(Report, SummaryBoldsBestValue) {
  const ExperimentResult r = run_artificial_suite({5}, {quick("drnc3"), quick("rnc")});
  std::ostringstream out;
  write_summary_md(out, r);
  EXPECT_NE(out.str().find("**"), std::string::npos);
}
