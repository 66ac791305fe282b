#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "deeprules/schema.hpp"

namespace deeprules {

enum class MissingValuePolicy {
  AsValue,  // the missing token becomes one more nominal value
  Reject,   // a missing token is a parse error
};

struct CsvOptions {
  /// Index of the class column; the last column when unset.
  std::optional<std::size_t> class_column;
  std::string missing_token = "?";
  MissingValuePolicy missing = MissingValuePolicy::AsValue;
  /// Class token treated as positive. When unset the most frequent class is
  /// positive and every other class negative.
  std::optional<std::string> positive_class;
  /// Encode against this schema instead of inferring one; values it does not
  /// know are parse errors.
  std::optional<Schema> schema;
};

/// Reads a header + comma-separated nominal table and one-hot encodes it.
///
/// The inferred schema keeps the column order of the file. Attribute values
/// are sorted, except attributes observed with exactly {0, 1}, which become
/// boolean attributes. Attributes with a single observed value are dropped.
OneHotDataset load_nominal_csv(const std::filesystem::path& path, const CsvOptions& options = {});
OneHotDataset parse_nominal_csv(std::istream& in, const CsvOptions& options,
                                const std::string& source = "<stream>");

/// Writes `data` in the dialect load_nominal_csv reads: attribute tokens then
/// a `class` column holding the positive class token or `neg`/`0`.
void write_dataset_csv(const OneHotDataset& data, std::ostream& out);

/// Sidecar written next to generated datasets (`<stem>.meta.json`).
struct DatasetMetadata {
  std::uint64_t seed = 0;
  std::uint64_t generator_seed = 0;
  std::size_t attempts = 0;
  std::size_t n_vars = 0;
  double positive_ratio = 0.0;
  std::size_t rule_count = 0;
  std::string positive_class = "1";

  friend bool operator==(const DatasetMetadata&, const DatasetMetadata&) = default;
};

std::filesystem::path metadata_path_for(const std::filesystem::path& csv);
void write_metadata(const std::filesystem::path& path, const DatasetMetadata& meta);
DatasetMetadata read_metadata(const std::filesystem::path& path);

/// Loads a dataset, honouring a sidecar's positive class when one exists and
/// `options.positive_class` is unset.
OneHotDataset load_dataset(const std::filesystem::path& path, CsvOptions options = {});

}  // namespace deeprules
