#pragma once

#include <stdexcept>
#include <string>

namespace mosmc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration or arguments (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or ill-formed model / query (CLI exit code 3).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A statistical guarantee could not be upheld, e.g. an expected-reward run
/// hit the step limit (CLI exit code 4).
class StatisticalAbort : public Error {
 public:
  using Error::Error;
};

/// Geometry requested for a dimension count it does not support.
class UnsupportedDimension : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace mosmc
