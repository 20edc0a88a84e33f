#pragma once

#include <stdexcept>
#include <string>

namespace frfacs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument to an operation (mismatched grids, bad sizes, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed input files (ragged rows, unparsable cells, bad grid header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or unusable configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (ill-conditioned system, degenerate decomposition).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace frfacs
