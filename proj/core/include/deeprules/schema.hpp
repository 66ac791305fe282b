#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deeprules/bit_matrix.hpp"

namespace deeprules {

/// A nominal attribute. Boolean attributes have exactly the values {"1", "0"}
/// (in that order) and render their literals as `name` / `not name`.
struct Attribute {
  std::string name;
  std::vector<std::string> values;
  bool boolean = false;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// Ordered nominal attributes and their one-hot literal columns. The columns
/// of one attribute are contiguous and follow the attribute's value order.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Attribute> attributes);

  /// `n` boolean attributes named a, b, c, ... (or x1.. when n > 26).
  static Schema booleans(std::size_t n);
  static Schema booleans(std::vector<std::string> names);

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  std::size_t literal_count() const noexcept { return literal_count_; }

  std::size_t first_column(std::size_t attribute) const { return offsets_.at(attribute); }
  std::size_t column(std::size_t attribute, std::size_t value) const;
  std::size_t attribute_of(std::size_t column) const { return column_attribute_.at(column); }
  std::size_t value_of(std::size_t column) const { return column - first_column(attribute_of(column)); }

  std::optional<std::size_t> find_value(std::size_t attribute, std::string_view token) const;

  /// Human-readable literal: `b`, `not b`, or `tl=x`.
  std::string literal_name(std::size_t column) const;

  /// Number of complete one-hot assignments (product of value counts),
  /// saturating at SIZE_MAX.
  std::size_t assignment_count() const noexcept;

  /// One-hot rows for every complete assignment, first attribute most
  /// significant. Throws ResourceLimitError above `limit` rows.
  BitMatrix enumerate_assignments(std::size_t limit = std::size_t{1} << 20) const;

  friend bool operator==(const Schema& a, const Schema& b) { return a.attributes_ == b.attributes_; }

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> column_attribute_;
  std::size_t literal_count_ = 0;
};

/// One-hot encoded binary classification data.
struct OneHotDataset {
  Schema schema;
  BitMatrix x;  // rows x schema.literal_count()
  BitVector y;
  std::string provenance;
  std::string positive_class = "1";

  std::size_t size() const noexcept { return x.rows(); }
  double positive_ratio() const;

  /// Rows `indices` of this dataset, in that order.
  OneHotDataset subset(const std::vector<std::size_t>& indices) const;

  /// Throws std::invalid_argument unless every row sets exactly one literal
  /// per attribute and the label vector matches the row count.
  void validate() const;
};

}  // namespace deeprules
