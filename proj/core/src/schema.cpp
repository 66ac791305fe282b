#include "deeprules/schema.hpp"

#include <limits>
#include <stdexcept>

#include "deeprules/errors.hpp"

namespace deeprules {

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
  offsets_.reserve(attributes_.size());
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    const Attribute& attr = attributes_[a];
    if (attr.values.size() < 2)
      throw std::invalid_argument("attribute '" + attr.name + "' needs at least two values");
    if (attr.boolean && (attr.values.size() != 2 || attr.values[0] != "1" || attr.values[1] != "0"))
      throw std::invalid_argument("boolean attribute '" + attr.name + "' must have values {1, 0}");
    offsets_.push_back(literal_count_);
    literal_count_ += attr.values.size();
    column_attribute_.insert(column_attribute_.end(), attr.values.size(), a);
  }
}

Schema Schema::booleans(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i + 1));
  }
  return booleans(std::move(names));
}

Schema Schema::booleans(std::vector<std::string> names) {
  std::vector<Attribute> attrs;
  attrs.reserve(names.size());
  for (auto& name : names) attrs.push_back(Attribute{std::move(name), {"1", "0"}, true});
  return Schema(std::move(attrs));
}

std::size_t Schema::column(std::size_t attribute, std::size_t value) const {
  if (value >= attributes_.at(attribute).values.size())
    throw std::out_of_range("attribute value index out of range");
  return offsets_[attribute] + value;
}

std::optional<std::size_t> Schema::find_value(std::size_t attribute, std::string_view token) const {
  const auto& values = attributes_.at(attribute).values;
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (values[v] == token) return v;
  }
  return std::nullopt;
}

std::string Schema::literal_name(std::size_t column) const {
  const std::size_t a = attribute_of(column);
  const Attribute& attr = attributes_[a];
  const std::size_t v = column - offsets_[a];
  if (attr.boolean) return v == 0 ? attr.name : "not " + attr.name;
  return attr.name + "=" + attr.values[v];
}

std::size_t Schema::assignment_count() const noexcept {
  std::size_t total = 1;
  for (const auto& attr : attributes_) {
    if (total > std::numeric_limits<std::size_t>::max() / attr.values.size())
      return std::numeric_limits<std::size_t>::max();
    total *= attr.values.size();
  }
  return total;
}

BitMatrix Schema::enumerate_assignments(std::size_t limit) const {
  const std::size_t total = assignment_count();
  if (total > limit)
    throw ResourceLimitError("schema has " + std::to_string(total) +
                             " assignments, above the enumeration limit " + std::to_string(limit));
  BitMatrix rows(total, literal_count_);
  std::vector<std::size_t> digits(attributes_.size(), 0);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t a = 0; a < attributes_.size(); ++a) rows.set(r, offsets_[a] + digits[a], true);
    // Odometer increment, last attribute fastest.
    for (std::size_t a = attributes_.size(); a-- > 0;) {
      if (++digits[a] < attributes_[a].values.size()) break;
      digits[a] = 0;
    }
  }
  return rows;
}

double OneHotDataset::positive_ratio() const {
  if (y.size() == 0) return 0.0;
  return static_cast<double>(y.count()) / static_cast<double>(y.size());
}

OneHotDataset OneHotDataset::subset(const std::vector<std::size_t>& indices) const {
  OneHotDataset out;
  out.schema = schema;
  out.provenance = provenance;
  out.positive_class = positive_class;
  out.x = BitMatrix(indices.size(), x.cols());
  out.y = BitVector(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = x.row(indices[i]);
    auto dst = out.x.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    out.y.set(i, y.get(indices[i]));
  }
  return out;
}

void OneHotDataset::validate() const {
  if (x.cols() != schema.literal_count())
    throw std::invalid_argument("dataset width does not match schema literal count");
  if (y.size() != x.rows()) throw std::invalid_argument("label count does not match row count");
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      std::size_t set = 0;
      const std::size_t first = schema.first_column(a);
      for (std::size_t v = 0; v < schema.attributes()[a].values.size(); ++v) set += x.get(r, first + v);
      if (set != 1)
        throw std::invalid_argument("row " + std::to_string(r) + " violates one-hot encoding of '" +
                                    schema.attributes()[a].name + "'");
    }
  }
}

}  // namespace deeprules
