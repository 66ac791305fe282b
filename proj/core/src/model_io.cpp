#include "deeprules/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deeprules/errors.hpp"

namespace deeprules {
namespace {

using nlohmann::json;

std::string encode_row(const BitMatrix& m, std::size_t r) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s((m.cols() + 3) / 4, '0');
  for (std::size_t q = 0; q < s.size(); ++q) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4 && 4 * q + b < m.cols(); ++b)
      if (m.get(r, 4 * q + b)) nibble |= 1U << b;
    s[q] = kHex[nibble];
  }
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ParseError(source_ + " at " + (pointer.empty() ? "/" : pointer), message);
  }

  const json& field(const json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer, std::string("missing field '") + key + "'");
    return *it;
  }

  std::size_t count(const json& v, const std::string& pointer) const {
    if (!v.is_number_unsigned()) fail(pointer, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

}  // namespace

std::string save_model(const RuleNetwork& net) {
  nlohmann::ordered_json doc;
  doc["format"] = "deeprules-model";
  doc["version"] = kModelFormatVersion;
  auto attrs = nlohmann::ordered_json::array();
  for (const auto& a : net.schema().attributes()) {
    nlohmann::ordered_json attr;
    attr["name"] = a.name;
    attr["values"] = a.values;
    attr["boolean"] = a.boolean;
    attrs.push_back(std::move(attr));
  }
  doc["schema"] = std::move(attrs);
  doc["layer_sizes"] = net.layer_sizes();
  auto layers = nlohmann::ordered_json::array();
  for (const auto& w : net.all_weights()) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < w.rows(); ++r) rows.push_back(encode_row(w, r));
    layers.push_back(std::move(rows));
  }
  doc["weights"] = std::move(layers);
  return doc.dump(1) + "\n";
}

RuleNetwork load_model(const std::string& document, const std::string& source) {
  Reader rd(source);
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(source + " at byte " + std::to_string(e.byte), e.what());
  }

  const json& format = rd.field(doc, "", "format");
  if (!format.is_string() || format.get<std::string>() != "deeprules-model")
    rd.fail("/format", "not a deeprules model document");
  const json& version = rd.field(doc, "", "version");
  if (!version.is_number_integer()) rd.fail("/version", "expected an integer");
  if (version.get<int>() != kModelFormatVersion)
    throw UnsupportedVersionError(source + " at /version", "unsupported model format version " +
                                                               std::to_string(version.get<int>()) + " (expected " +
                                                               std::to_string(kModelFormatVersion) + ")");

  const json& schema_json = rd.field(doc, "", "schema");
  if (!schema_json.is_array()) rd.fail("/schema", "expected an array");
  std::vector<Attribute> attrs;
  for (std::size_t a = 0; a < schema_json.size(); ++a) {
    const std::string ptr = "/schema/" + std::to_string(a);
    Attribute attr;
    const json& name = rd.field(schema_json[a], ptr, "name");
    if (!name.is_string()) rd.fail(ptr + "/name", "expected a string");
    attr.name = name.get<std::string>();
    const json& values = rd.field(schema_json[a], ptr, "values");
    if (!values.is_array()) rd.fail(ptr + "/values", "expected an array");
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (!values[v].is_string()) rd.fail(ptr + "/values/" + std::to_string(v), "expected a string");
      attr.values.push_back(values[v].get<std::string>());
    }
    const json& boolean = rd.field(schema_json[a], ptr, "boolean");
    if (!boolean.is_boolean()) rd.fail(ptr + "/boolean", "expected true or false");
    attr.boolean = boolean.get<bool>();
    attrs.push_back(std::move(attr));
  }
  Schema schema;
  try {
    schema = Schema(std::move(attrs));
  } catch (const std::invalid_argument& e) {
    rd.fail("/schema", e.what());
  }

  const json& sizes_json = rd.field(doc, "", "layer_sizes");
  if (!sizes_json.is_array() || sizes_json.size() < 3) rd.fail("/layer_sizes", "expected at least three layer sizes");
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < sizes_json.size(); ++i)
    sizes.push_back(rd.count(sizes_json[i], "/layer_sizes/" + std::to_string(i)));
  if (sizes.front() != schema.literal_count())
    rd.fail("/layer_sizes/0", "input size " + std::to_string(sizes.front()) + " does not match schema literal count " +
                                  std::to_string(schema.literal_count()));
  if (sizes.back() != 1) rd.fail("/layer_sizes", "output layer must have exactly one node");
  for (std::size_t i = 1; i + 1 < sizes.size(); ++i)
    if (sizes[i] == 0) rd.fail("/layer_sizes/" + std::to_string(i), "hidden layer sizes must be positive");

  RuleNetwork net(schema, std::vector<std::size_t>(sizes.begin() + 1, sizes.end() - 1));
  const json& weights = rd.field(doc, "", "weights");
  if (!weights.is_array() || weights.size() != net.weight_layer_count())
    rd.fail("/weights", "expected " + std::to_string(net.weight_layer_count()) + " weight layers");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::string ptr = "/weights/" + std::to_string(i);
    BitMatrix& w = net.weights(i);
    if (!weights[i].is_array() || weights[i].size() != w.rows())
      rd.fail(ptr, "expected " + std::to_string(w.rows()) + " rows");
    const std::size_t width = (w.cols() + 3) / 4;
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const std::string rptr = ptr + "/" + std::to_string(r);
      if (!weights[i][r].is_string()) rd.fail(rptr, "expected a hex string");
      const std::string hex = weights[i][r].get<std::string>();
      if (hex.size() != width) rd.fail(rptr, "expected " + std::to_string(width) + " hex digits");
      for (std::size_t q = 0; q < hex.size(); ++q) {
        const int nibble = hex_value(hex[q]);
        if (nibble < 0) rd.fail(rptr, std::string("invalid hex digit '") + hex[q] + "'");
        for (std::size_t b = 0; b < 4; ++b) {
          if (!((nibble >> b) & 1)) continue;
          if (4 * q + b >= w.cols()) rd.fail(rptr, "bit set beyond the layer width");
          w.set(r, 4 * q + b, true);
        }
      }
    }
  }
  return net;
}

void save_model_file(const RuleNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write model '" + path.string() + "'");
  out << save_model(net);
}

RuleNetwork load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open model '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str(), path.string());
}

}  // namespace deeprules
