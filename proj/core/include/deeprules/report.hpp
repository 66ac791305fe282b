#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "deeprules/experiment.hpp"
#include "deeprules/stats.hpp"

namespace deeprules {

/// `dataset,%(+),<model names...>` with one row per dataset, four decimals.
void write_report_csv(std::ostream& out, const ExperimentResult& result);

/// `dataset,model,fold0,fold1,mean,retries`.
void write_folds_csv(std::ostream& out, const ExperimentResult& result);

/// `dataset,row,fold`: the split of every dataset, so external baselines
/// can train on identical folds.
void write_fold_indices_csv(std::ostream& out, const ExperimentResult& result);

/// Markdown table with the best accuracy of each row in bold, average
/// accuracy and rank, the Friedman test and Nemenyi critical distances.
void write_summary_md(std::ostream& out, const ExperimentResult& result);

/// `step,train_accuracy`: the mean learning curve of one model.
void write_learning_curve_csv(std::ostream& out, const ExperimentResult& result, std::size_t model);

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

/// Writes reports/{report,folds,fold_indices}.csv, reports/summary.md and
/// traces/<model id>.csv under `out_dir`.
void write_experiment_outputs(const std::filesystem::path& out_dir, const ExperimentResult& result);

/// A report.csv read back.
struct ReportTable {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::vector<double> positive_ratio;
  std::vector<std::vector<double>> accuracies;  // datasets x models
};

/// Throws ParseError with the line number on malformed input.
ReportTable read_report_csv(std::istream& in, const std::string& source = "<stream>");
ReportTable read_report_file(const std::filesystem::path& path);

/// Friedman and Nemenyi summary of a report as plain text.
std::string stats_summary(const ReportTable& table);

}  // namespace deeprules
