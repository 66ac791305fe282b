#pragma once

#include <stdexcept>
#include <string>

namespace deeprules {

// Precondition violations use std::invalid_argument directly. The types
// below cover failures callers are expected to tell apart.

/// Malformed input document (model file, CSV, report). `what()` carries the
/// location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class UnsupportedVersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A bounded computation (DNF expansion, truth-table enumeration) would
/// exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concept generation ran out of reseeds before finding an acceptable concept.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable dataset/model file.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deeprules
