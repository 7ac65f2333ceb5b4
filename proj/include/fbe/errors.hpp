#pragma once

#include <stdexcept>
#include <string>

namespace fbe {

// Input vector or matrix has the wrong length for the object it is applied to.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid construction parameters (dimensions, factorizations, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested object exceeds an enforced size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed or truncated serialized data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbe
