#pragma once

#include <stdexcept>
#include <string>

namespace ctrllab {

/// Invalid distribution parameter, index out of range, malformed spec.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A verifier was called on an input that violates its hypothesis.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Floating-point routine failed (e.g. eigensolver non-convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact arithmetic requested above the configured dimension cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Combinatorial search ran past its enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctrllab
