#pragma once

#include <stdexcept>
#include <string>

namespace hypersgg {

// Bad command-line usage. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (parse failures, invariant
// violations). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible configuration: vocabulary mismatch, bad kernel shape, and
// similar. Also exits with code 2.
class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace hypersgg
