#pragma once

#include <filesystem>
#include <string>

#include "deeprules/network.hpp"

namespace deeprules {

inline constexpr int kModelFormatVersion = 1;

/// Serializes a network as versioned JSON:
///
///   {"format": "deeprules-model", "version": 1,
///    "schema": [{"name": "a", "values": ["1", "0"], "boolean": true}, ...],
///    "layer_sizes": [s0, ..., 1],
///    "weights": [["<hex row 0>", "<hex row 1>", ...], ...]}
///
/// Weight row j of layer i is a hex string whose nibble q holds columns
/// 4q..4q+3, least significant bit first.
std::string save_model(const RuleNetwork& net);

/// Throws ParseError (location in the message) for malformed documents and
/// UnsupportedVersionError for an unknown `version`.
RuleNetwork load_model(const std::string& document, const std::string& source = "<model>");

void save_model_file(const RuleNetwork& net, const std::filesystem::path& path);
RuleNetwork load_model_file(const std::filesystem::path& path);

}  // namespace deeprules
