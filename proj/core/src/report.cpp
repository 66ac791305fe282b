#include "deeprules/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "deeprules/errors.hpp"

namespace deeprules {
namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write '" + path.string() + "'");
  return out;
}

void write_friedman_lines(std::ostream& out, const std::vector<double>& ranks, std::size_t n_datasets,
                          const std::string& prefix) {
  const std::size_t k = ranks.size();
  if (k >= 3 && n_datasets >= 2) {
    const auto f = friedman_from_ranks(ranks, n_datasets, 0.05);
    out << prefix << "Friedman chi-square: " << fixed(f.statistic, 3) << " (df " << f.degrees_of_freedom
        << ", critical value " << fixed(f.critical_value, 3) << " at 95%): "
        << (f.significant ? "significant" : "not significant") << '\n';
  }
  if (k >= 2 && k <= 10 && n_datasets >= 1) {
    out << prefix << "Nemenyi critical distance: " << fixed(nemenyi_cd(k, n_datasets, 0.05), 3) << " (95%), "
        << fixed(nemenyi_cd(k, n_datasets, 0.10), 3) << " (90%)\n";
  }
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentResult& result) {
  out << "dataset,%(+)";
  for (const auto& m : result.models) out << ',' << m.name;
  out << '\n';
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    out << result.datasets[d] << ',' << fixed(result.positive_ratio[d]);
    for (const auto& c : result.cells[d]) out << ',' << fixed(c.mean_accuracy);
    out << '\n';
  }
}

void write_folds_csv(std::ostream& out, const ExperimentResult& result) {
  out << "dataset,model,fold0,fold1,mean,retries\n";
  for (std::size_t d = 0; d < result.datasets.size(); ++d)
    for (std::size_t m = 0; m < result.models.size(); ++m) {
      const auto& c = result.cells[d][m];
      out << result.datasets[d] << ',' << result.models[m].name << ',' << fixed(c.fold_accuracy[0], 6) << ','
          << fixed(c.fold_accuracy[1], 6) << ',' << fixed(c.mean_accuracy, 6) << ',' << c.retries << '\n';
    }
}

void write_fold_indices_csv(std::ostream& out, const ExperimentResult& result) {
  out << "dataset,row,fold\n";
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    const Split& s = result.splits[d];
    std::vector<std::pair<std::size_t, int>> rows;
    for (int f = 0; f < 2; ++f)
      for (std::size_t r : s.folds[f]) rows.emplace_back(r, f);
    std::sort(rows.begin(), rows.end());
    for (const auto& [r, f] : rows) out << result.datasets[d] << ',' << r << ',' << f << '\n';
  }
}

void write_summary_md(std::ostream& out, const ExperimentResult& result) {
  out << "| dataset | %(+) |";
  for (const auto& m : result.models) out << ' ' << m.name << " |";
  out << "\n|---|---|";
  for (std::size_t m = 0; m < result.models.size(); ++m) out << "---|";
  out << '\n';
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    const auto& row = result.cells[d];
    double best = 0.0;
    for (const auto& c : row) best = std::max(best, c.mean_accuracy);
    out << "| " << result.datasets[d] << " | " << fixed(result.positive_ratio[d]) << " |";
    for (const auto& c : row) {
      const std::string v = fixed(c.mean_accuracy);
      // Compare the printed values so ties in the table are bolded together.
      out << ' ' << (v == fixed(best) ? "**" + v + "**" : v) << " |";
    }
    out << '\n';
  }
  const auto avg = result.average_accuracy();
  const auto ranks = result.average_ranks();
  out << "| avg accuracy | |";
  for (double a : avg) out << ' ' << fixed(a) << " |";
  out << "\n| avg rank | |";
  for (double r : ranks) out << ' ' << fixed(r, 3) << " |";
  out << "\n\n";

  std::size_t retries = 0;
  for (const auto& row : result.cells)
    for (const auto& c : row) retries += c.retries;
  out << "Re-initializations after degenerate models: " << retries << "\n";
  write_friedman_lines(out, ranks, result.datasets.size(), "");
}

void write_learning_curve_csv(std::ostream& out, const ExperimentResult& result, std::size_t model) {
  const auto curves = result.mean_learning_curves();
  out << "step,train_accuracy\n";
  for (std::size_t t = 0; t < curves.at(model).size(); ++t) out << t << ',' << fixed(curves[model][t], 6) << '\n';
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "model,n,hidden_sizes,avg_rule_length,init_probability,mean_accuracy\n";
  for (const auto& r : rows) {
    std::string sizes;
    for (std::size_t s : r.spec.network.hidden_sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
    out << r.spec.id << ',' << r.spec.network.hidden_sizes.size() << ',' << sizes << ','
        << fixed(r.spec.network.avg_rule_length, 0) << ',' << fixed(r.spec.network.init_probability, 3) << ','
        << fixed(r.mean_accuracy) << '\n';
  }
}

void write_experiment_outputs(const std::filesystem::path& out_dir, const ExperimentResult& result) {
  const auto reports = out_dir / "reports";
  const auto traces = out_dir / "traces";
  std::filesystem::create_directories(reports);
  std::filesystem::create_directories(traces);
  {
    auto out = open_output(reports / "report.csv");
    write_report_csv(out, result);
  }
  {
    auto out = open_output(reports / "folds.csv");
    write_folds_csv(out, result);
  }
  {
    auto out = open_output(reports / "fold_indices.csv");
    write_fold_indices_csv(out, result);
  }
  {
    auto out = open_output(reports / "summary.md");
    write_summary_md(out, result);
  }
  for (std::size_t m = 0; m < result.models.size(); ++m) {
    auto out = open_output(traces / (result.models[m].id + ".csv"));
    write_learning_curve_csv(out, result, m);
  }
}

ReportTable read_report_csv(std::istream& in, const std::string& source) {
  ReportTable table;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& message) -> void {
    throw ParseError(source + ":" + std::to_string(line_no), message);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("empty report");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 3 || header[0] != "dataset" || header[1] != "%(+)")
    fail("expected header 'dataset,%(+),<models...>'");
  table.models.assign(header.begin() + 2, header.end());

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size())
      fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    auto number = [&](const std::string& s) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) fail("'" + s + "' is not a number");
      return v;
    };
    table.datasets.push_back(fields[0]);
    table.positive_ratio.push_back(number(fields[1]));
    std::vector<double> accs;
    for (std::size_t i = 2; i < fields.size(); ++i) accs.push_back(number(fields[i]));
    table.accuracies.push_back(std::move(accs));
  }
  if (table.datasets.empty()) fail("report has no dataset rows");
  return table;
}

ReportTable read_report_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open report '" + path.string() + "'");
  return read_report_csv(in, path.string());
}

std::string stats_summary(const ReportTable& table) {
  std::ostringstream out;
  const auto ranks = average_ranks(table.accuracies);
  const std::size_t n = table.datasets.size();
  out << "datasets: " << n << ", models: " << table.models.size() << '\n';
  for (std::size_t m = 0; m < table.models.size(); ++m) {
    double sum = 0.0;
    for (const auto& row : table.accuracies) sum += row[m];
    out << table.models[m] << ": average accuracy " << fixed(sum / static_cast<double>(n)) << ", average rank "
        << fixed(ranks[m], 3) << '\n';
  }
  write_friedman_lines(out, ranks, n, "");
  return out.str();
}

}  // namespace deeprules
