#include "deeprules/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deeprules/errors.hpp"

namespace deeprules {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

std::string negative_token(const std::string& positive) { return positive == "1" ? "0" : "other"; }

}  // namespace

OneHotDataset parse_nominal_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_fields(line);
  }
  if (header.empty()) throw ParseError(source, "empty file");
  if (header.size() < 2) throw ParseError(source + ":" + std::to_string(line_no), "need at least one attribute and a class column");

  const std::size_t class_col = options.class_column.value_or(header.size() - 1);
  if (class_col >= header.size())
    throw ParseError(source, "class column " + std::to_string(class_col) + " out of range");

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(source + ":" + std::to_string(line_no),
                       "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c] == options.missing_token && options.missing == MissingValuePolicy::Reject)
        throw ParseError(source + ":" + std::to_string(line_no), "missing value in column '" + header[c] + "'");
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw ParseError(source, "no data rows");

  std::vector<std::size_t> attr_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != class_col) attr_cols.push_back(c);

  Schema schema;
  std::vector<std::size_t> used_cols;  // file column per schema attribute
  if (options.schema) {
    schema = *options.schema;
    // Match schema attributes to file columns by name.
    for (const auto& attr : schema.attributes()) {
      auto it = std::find_if(attr_cols.begin(), attr_cols.end(), [&](std::size_t c) { return header[c] == attr.name; });
      if (it == attr_cols.end()) throw ParseError(source, "column '" + attr.name + "' required by schema is missing");
      used_cols.push_back(*it);
    }
  } else {
    std::vector<Attribute> attrs;
    for (std::size_t c : attr_cols) {
      std::set<std::string> seen;
      for (const auto& r : rows) seen.insert(r[c]);
      if (seen.size() < 2) continue;  // constant column carries no information
      Attribute attr;
      attr.name = header[c];
      if (seen == std::set<std::string>{"0", "1"}) {
        attr.values = {"1", "0"};
        attr.boolean = true;
      } else {
        attr.values.assign(seen.begin(), seen.end());
      }
      attrs.push_back(std::move(attr));
      used_cols.push_back(c);
    }
    schema = Schema(std::move(attrs));
  }

  std::string positive;
  if (options.positive_class) {
    positive = *options.positive_class;
  } else {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : rows) ++counts[r[class_col]];
    // Most frequent class; ties go to the lexicographically smallest token.
    std::size_t best = 0;
    for (const auto& [token, n] : counts) {
      if (n > best) {
        best = n;
        positive = token;
      }
    }
  }

  OneHotDataset data;
  data.schema = schema;
  data.provenance = source;
  data.positive_class = positive;
  data.x = BitMatrix(rows.size(), schema.literal_count());
  data.y = BitVector(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t a = 0; a < used_cols.size(); ++a) {
      const std::string& token = rows[r][used_cols[a]];
      const auto v = schema.find_value(a, token);
      if (!v)
        throw ParseError(source + ": row " + std::to_string(r + 1),
                         "value '" + token + "' unknown for attribute '" + schema.attributes()[a].name + "'");
      data.x.set(r, schema.column(a, *v), true);
    }
    data.y.set(r, rows[r][class_col] == positive);
  }
  return data;
}

OneHotDataset load_nominal_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open dataset '" + path.string() + "'");
  return parse_nominal_csv(in, options, path.string());
}

void write_dataset_csv(const OneHotDataset& data, std::ostream& out) {
  const auto& attrs = data.schema.attributes();
  for (const auto& attr : attrs) out << attr.name << ',';
  out << "class\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const std::size_t first = data.schema.first_column(a);
      std::size_t value = 0;
      while (value < attrs[a].values.size() && !data.x.get(r, first + value)) ++value;
      if (value == attrs[a].values.size())
        throw std::invalid_argument("row " + std::to_string(r) + " has no value for '" + attrs[a].name + "'");
      out << attrs[a].values[value] << ',';
    }
    out << (data.y.get(r) ? data.positive_class : negative_token(data.positive_class)) << '\n';
  }
}

std::filesystem::path metadata_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta.json");
  return p;
}

void write_metadata(const std::filesystem::path& path, const DatasetMetadata& meta) {
  nlohmann::ordered_json j;
  j["seed"] = meta.seed;
  j["generator_seed"] = meta.generator_seed;
  j["attempts"] = meta.attempts;
  j["n_vars"] = meta.n_vars;
  j["positive_ratio"] = meta.positive_ratio;
  j["rule_count"] = meta.rule_count;
  j["positive_class"] = meta.positive_class;
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

DatasetMetadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open metadata '" + path.string() + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    DatasetMetadata meta;
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.generator_seed = j.at("generator_seed").get<std::uint64_t>();
    meta.attempts = j.at("attempts").get<std::size_t>();
    meta.n_vars = j.at("n_vars").get<std::size_t>();
    meta.positive_ratio = j.at("positive_ratio").get<double>();
    meta.rule_count = j.at("rule_count").get<std::size_t>();
    meta.positive_class = j.at("positive_class").get<std::string>();
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
}

OneHotDataset load_dataset(const std::filesystem::path& path, CsvOptions options) {
  if (!std::filesystem::exists(path)) throw FileError("dataset '" + path.string() + "' does not exist");
  const auto meta = metadata_path_for(path);
  if (!options.positive_class && std::filesystem::exists(meta)) {
    options.positive_class = read_metadata(meta).positive_class;
  }
  return load_nominal_csv(path, options);
}

}  // namespace deeprules
