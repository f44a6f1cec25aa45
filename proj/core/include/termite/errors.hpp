#pragma once

#include <stdexcept>
#include <string>

namespace termite {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or incomplete configuration, missing referenced files. CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (corpus, TSV/CSV rows, vector files). CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Search provider / network failures. CLI exit code 3.
class ProviderError : public Error {
 public:
  using Error::Error;
};

}  // namespace termite
