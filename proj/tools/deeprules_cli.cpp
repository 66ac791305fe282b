// deeprules command-line tool.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deeprules/concept.hpp"
#include "deeprules/dataset_io.hpp"
#include "deeprules/errors.hpp"
#include "deeprules/experiment.hpp"
#include "deeprules/fixtures.hpp"
#include "deeprules/model_io.hpp"
#include "deeprules/report.hpp"
#include "deeprules/rule_set.hpp"
#include "deeprules/stats.hpp"

namespace fs = std::filesystem;
using namespace deeprules;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint64_t> read_seeds_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open seeds file " + path.string());
  std::vector<std::uint64_t> seeds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      std::size_t used = 0;
      std::uint64_t v = 0;
      try {
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok[0] == '-')
        throw ParseError(path.string() + ":" + std::to_string(line_no), "not a seed: '" + tok + "'");
      seeds.push_back(v);
    }
  }
  if (seeds.empty()) throw ParseError(path.string(), "no seeds");
  return seeds;
}

// Seeds from --seeds, then --seeds-file, then the built-in twenty.
std::vector<std::uint64_t> resolve_seeds(const std::vector<std::uint64_t>& seeds, const std::string& seeds_file) {
  if (!seeds.empty() && !seeds_file.empty()) throw UsageError("--seeds and --seeds-file are exclusive");
  if (!seeds.empty()) return seeds;
  if (!seeds_file.empty()) return read_seeds_file(seeds_file);
  return default_concept_seeds();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw FileError("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << text;
  if (!out) throw FileError("cannot write " + path.string());
}

fs::path write_concept(const Concept& c, const fs::path& dir) {
  const fs::path csv = dir / (std::to_string(c.seed) + ".csv");
  std::ostringstream text;
  write_dataset_csv(c.data, text);
  write_text(csv, text.str());
  DatasetMetadata meta;
  meta.seed = c.seed;
  meta.generator_seed = c.generator_seed;
  meta.attempts = c.attempts;
  meta.n_vars = c.data.schema.attribute_count();
  meta.positive_ratio = c.data.positive_ratio();
  meta.rule_count = c.minimized.size();
  meta.positive_class = c.data.positive_class;
  write_metadata(metadata_path_for(csv), meta);
  return csv;
}

std::vector<ModelSpec> resolve_models(const std::vector<std::string>& ids) {
  if (ids.empty()) return default_presets();
  std::vector<ModelSpec> models;
  for (const auto& id : ids) models.push_back(preset(id));
  return models;
}

void print_progress(const std::string& dataset, const std::string& model, const CvResult& r) {
  std::cerr << dataset << " " << model << ": " << std::fixed << std::setprecision(4) << r.mean_accuracy
            << (r.retries ? " (" + std::to_string(r.retries) + " re-initializations)" : "") << "\n";
}

// ---------------------------------------------------------------------------

struct GenDataArgs {
  std::vector<std::uint64_t> seeds;
  std::string seeds_file;
  std::string out = "data";
};

int cmd_gen_data(const GenDataArgs& a) {
  const auto seeds = resolve_seeds(a.seeds, a.seeds_file);
  ensure_dir(a.out);
  for (std::uint64_t s : seeds) {
    const Concept c = generate_concept(s);
    const fs::path csv = write_concept(c, a.out);
    std::cout << csv.string() << " positive_ratio=" << std::fixed << std::setprecision(4) << c.data.positive_ratio()
              << " rules=" << c.minimized.size() << " attempts=" << c.attempts << "\n";
  }
  return kOk;
}

struct TrainArgs {
  std::string data;
  std::string preset = "drnc5";
  std::vector<std::size_t> hidden;
  double rule_length = 0;
  double p = -1;
  std::size_t epochs = 0;
  std::size_t batch_size = 0;
  std::string out = ".";
  std::string name;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 10;
};

int cmd_train(const TrainArgs& a) {
  ModelSpec spec = preset(a.preset);
  if (!a.hidden.empty()) spec.network.hidden_sizes = a.hidden;
  if (a.rule_length > 0) spec.network.avg_rule_length = a.rule_length;
  if (a.p >= 0) spec.network.init_probability = a.p;
  if (a.epochs > 0) spec.train.n_epochs = a.epochs;
  if (a.batch_size > 0) spec.train.batch_size = a.batch_size;
  spec.network.validate();
  spec.train.validate();

  const OneHotDataset data = load_dataset(a.data);
  const std::string name = a.name.empty() ? fs::path(a.data).stem().string() + "-" + spec.id : a.name;
  const RetryResult r = retry_on_degenerate(spec, data, derive_seed(a.seed, "train"), a.max_attempts);

  const fs::path models = fs::path(a.out) / "models";
  const fs::path traces = fs::path(a.out) / "traces";
  ensure_dir(models);
  ensure_dir(traces);
  save_model_file(r.model.net, models / (name + ".json"));
  std::ostringstream trace;
  write_trace(trace, r.model.fit.trace);
  write_text(traces / (name + ".csv"), trace.str());

  std::cout << "model: " << (models / (name + ".json")).string() << "\n"
            << "trace: " << (traces / (name + ".csv")).string() << "\n"
            << "re-initializations: " << r.retries << "\n"
            << "training accuracy: " << std::fixed << std::setprecision(4) << r.model.fit.final_accuracy << "\n";
  return kOk;
}

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
};

int cmd_predict(const PredictArgs& a) {
  const RuleNetwork net = load_model_file(a.model);
  CsvOptions o;
  o.schema = net.schema();
  const OneHotDataset data = load_dataset(a.data, o);
  const BitVector y = predict(net, data.x);
  std::ostringstream text;
  text << "row,prediction\n";
  for (std::size_t r = 0; r < y.size(); ++r) text << r << "," << (y.get(r) ? 1 : 0) << "\n";
  if (a.out.empty()) {
    std::cout << text.str();
  } else {
    write_text(a.out, text.str());
  }
  std::cerr << "accuracy: " << std::fixed << std::setprecision(4) << accuracy(data.y, y) << "\n";
  return kOk;
}

struct ExportArgs {
  std::string model;
  std::string fixture;
  std::string head = "h";
  bool structured = false;
  std::string out;
};

int cmd_export_rules(const ExportArgs& a) {
  if (a.model.empty() == a.fixture.empty()) throw UsageError("give exactly one of --model or --fixture");
  RuleNetwork net;
  StructuredOptions so;
  std::string head = a.head;
  if (a.fixture == "parity") {
    net = fixtures::parity_network();
    so = fixtures::parity_export_options();
    if (head == "h") head = "parity";
  } else if (a.fixture == "hierarchical") {
    net = fixtures::hierarchical_concept_network();
  } else if (!a.fixture.empty()) {
    throw UsageError("unknown fixture '" + a.fixture + "' (parity, hierarchical)");
  } else {
    net = load_model_file(a.model);
  }
  const std::string text =
      a.structured ? to_prolog_structured(net, head, so) : to_prolog(extract_dnf(net), net.schema(), head);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return kOk;
}

struct GridArgs {
  std::string grid = "deep";
  std::vector<std::uint64_t> seeds;
  std::string seeds_file;
  std::size_t limit = 0;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
};

int cmd_grid_search(const GridArgs& a) {
  std::vector<ModelSpec> grid = a.grid == "deep" ? deep_grid() : shallow_grid();
  if (a.limit > 0 && a.limit < grid.size()) grid.resize(a.limit);
  std::vector<NamedDataset> datasets;
  for (std::uint64_t s : resolve_seeds(a.seeds, a.seeds_file))
    datasets.push_back({std::to_string(s), generate_concept(s).data});
  ExperimentOptions o;
  o.master_seed = a.seed;
  if (!a.quiet) o.progress = print_progress;
  const auto rows = grid_search(datasets, grid, o);

  const fs::path reports = fs::path(a.out) / "reports";
  ensure_dir(reports);
  std::ostringstream text;
  write_grid_csv(text, rows);
  const fs::path path = reports / ("grid-" + a.grid + ".csv");
  write_text(path, text.str());
  const auto best = std::max_element(rows.begin(), rows.end(), [](const GridRow& x, const GridRow& y) {
    return x.mean_accuracy < y.mean_accuracy;
  });
  std::cout << "grid: " << path.string() << "\n";
  if (best != rows.end())
    std::cout << "best: " << best->spec.id << " " << std::fixed << std::setprecision(4) << best->mean_accuracy
              << "\n";
  return kOk;
}

struct ExperimentArgs {
  std::string suite = "artificial";
  std::vector<std::uint64_t> seeds;
  std::string seeds_file;
  std::vector<std::string> data;
  std::string data_dir = "data/uci";
  std::vector<std::string> models;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::size_t max_attempts = 10;
  bool quiet = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentOptions o;
  o.master_seed = a.seed;
  o.cv.max_attempts = a.max_attempts;
  if (!a.quiet) o.progress = print_progress;
  const auto models = resolve_models(a.models);
  const fs::path data_out = fs::path(a.out) / "data";
  ensure_dir(data_out);

  ExperimentResult result;
  if (a.suite == "artificial") {
    if (!a.data.empty()) throw UsageError("--data only applies to --suite uci");
    std::vector<NamedDataset> datasets;
    for (std::uint64_t s : resolve_seeds(a.seeds, a.seeds_file)) {
      const Concept c = generate_concept(s);
      write_concept(c, data_out);
      datasets.push_back({std::to_string(s), c.data});
    }
    result = run_experiment(datasets, models, o);
  } else {
    if (!a.seeds.empty() || !a.seeds_file.empty()) throw UsageError("seeds only apply to --suite artificial");
    std::vector<fs::path> paths(a.data.begin(), a.data.end());
    if (paths.empty()) {
      if (!fs::is_directory(a.data_dir)) throw FileError("no such directory " + a.data_dir);
      for (const auto& e : fs::directory_iterator(a.data_dir))
        if (e.path().extension() == ".csv") paths.push_back(e.path());
      std::sort(paths.begin(), paths.end());
      if (paths.empty()) throw FileError("no CSV files in " + a.data_dir);
    }
    result = run_uci_suite(paths, models, o);
    // Copies keep row numbering, so fold_indices.csv applies to them as-is.
    for (const auto& p : paths)
      fs::copy_file(p, data_out / p.filename(), fs::copy_options::overwrite_existing);
  }
  write_experiment_outputs(a.out, result);
  std::ostringstream summary;
  write_summary_md(summary, result);
  std::cout << summary.str();
  return kOk;
}

struct StatsArgs {
  std::string report;
};

int cmd_stats(const StatsArgs& a) {
  std::cout << stats_summary(read_report_file(a.report));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep and shallow boolean rule networks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t master_seed = 0;
  app.add_option("--seed", master_seed, "Master seed; every random component derives its own seed from it")
      ->capture_default_str();

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate artificial concept datasets");
  gen_cmd->add_option("--seeds", gen.seeds, "Comma-separated concept seeds")->delimiter(',');
  gen_cmd->add_option("--seeds-file", gen.seeds_file, "File of seeds (whitespace or comma separated, # comments)");
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one network on a CSV dataset");
  train_cmd->add_option("--data", train.data, "Dataset CSV (class in the last column)")->required();
  train_cmd->add_option("--preset", train.preset, "drnc5, drnc3 or rnc")->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden, "Hidden layer sizes, overriding the preset")->delimiter(',');
  train_cmd->add_option("--rule-length", train.rule_length, "Average initial rule length");
  train_cmd->add_option("--p", train.p, "Inner-layer initialization probability");
  train_cmd->add_option("--epochs", train.epochs, "Training epochs");
  train_cmd->add_option("--batch-size", train.batch_size, "Mini-batch size");
  train_cmd->add_option("--max-attempts", train.max_attempts, "Initializations before giving up on a one-class model")
      ->capture_default_str();
  train_cmd->add_option("--name", train.name, "Output file stem (default <data stem>-<preset>)");
  train_cmd->add_option("--out", train.out, "Output directory (models/ and traces/ are created)")
      ->capture_default_str();

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Predict a dataset with a saved model");
  pred_cmd->add_option("--model", pred.model, "Model JSON")->required();
  pred_cmd->add_option("--data", pred.data, "Dataset CSV with the model's attributes")->required();
  pred_cmd->add_option("--out", pred.out, "Write predictions here instead of stdout");

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-rules", "Print a network as Prolog-style rules");
  exp_cmd->add_option("--model", exp.model, "Model JSON");
  exp_cmd->add_option("--fixture", exp.fixture, "Built-in network: parity or hierarchical");
  exp_cmd->add_option("--head", exp.head, "Head predicate name")->capture_default_str();
  exp_cmd->add_flag("--structured", exp.structured, "Keep the layer structure instead of expanding to a DNF");
  exp_cmd->add_option("--out", exp.out, "Write rules here instead of stdout");

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("grid-search", "Evaluate a hyperparameter grid on artificial datasets");
  grid_cmd->add_option("--grid", grid.grid, "deep or shallow")
      ->check(CLI::IsMember({"deep", "shallow"}))
      ->capture_default_str();
  grid_cmd->add_option("--seeds", grid.seeds, "Comma-separated concept seeds")->delimiter(',');
  grid_cmd->add_option("--seeds-file", grid.seeds_file, "File of concept seeds");
  grid_cmd->add_option("--limit", grid.limit, "Evaluate only the first N grid entries");
  grid_cmd->add_option("--out", grid.out, "Output directory (reports/ is created)")->capture_default_str();
  grid_cmd->add_flag("--quiet", grid.quiet, "No per-cell progress on stderr");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Cross-validate the presets on a dataset suite");
  ex_cmd->add_option("--suite", ex.suite, "artificial or uci")
      ->check(CLI::IsMember({"artificial", "uci"}))
      ->capture_default_str();
  ex_cmd->add_option("--seeds", ex.seeds, "Comma-separated concept seeds (artificial)")->delimiter(',');
  ex_cmd->add_option("--seeds-file", ex.seeds_file, "File of concept seeds (artificial)");
  ex_cmd->add_option("--data", ex.data, "Dataset CSVs (uci); dataset id is the file stem");
  ex_cmd->add_option("--data-dir", ex.data_dir, "Directory of CSVs used when --data is absent (uci)")
      ->capture_default_str();
  ex_cmd->add_option("--models", ex.models, "Comma-separated presets (default drnc5,drnc3,rnc)")->delimiter(',');
  ex_cmd->add_option("--max-attempts", ex.max_attempts, "Initializations per fold before giving up")
      ->capture_default_str();
  ex_cmd->add_option("--out", ex.out, "Output directory (data/, reports/, traces/ are created)")
      ->capture_default_str();
  ex_cmd->add_flag("--quiet", ex.quiet, "No per-cell progress on stderr");

  StatsArgs st;
  auto* st_cmd = app.add_subcommand("stats", "Friedman test and Nemenyi distances for a report.csv");
  st_cmd->add_option("report", st.report, "report.csv written by experiment")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    train.seed = grid.seed = ex.seed = master_seed;
    if (*gen_cmd) return cmd_gen_data(gen);
    if (*train_cmd) return cmd_train(train);
    if (*pred_cmd) return cmd_predict(pred);
    if (*exp_cmd) return cmd_export_rules(exp);
    if (*grid_cmd) return cmd_grid_search(grid);
    if (*ex_cmd) return cmd_experiment(ex);
    if (*st_cmd) return cmd_stats(st);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const DegenerateModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
