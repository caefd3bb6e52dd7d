#pragma once

#include <stdexcept>
#include <string>

namespace fcmac {

// Base for every error raised by the library. Messages name the offending
// axis, field or index so callers can print them verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown, duplicated or overlapping axis names.
class AxisError : public Error {
 public:
  using Error::Error;
};

// Two objects that must share an alphabet do not.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

// A pmf or kernel row that breaks nonnegativity / normalization.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

// An exhaustive search was asked to run past its configured size.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

// Input document does not match the expected JSON layout. `path` is a JSON
// pointer to the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace fcmac
