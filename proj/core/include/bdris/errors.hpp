#pragma once

#include <stdexcept>
#include <string>

namespace bdris {

// Invalid or inconsistent configuration values (also raised for malformed
// experiment files). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Block/matrix dimensions contradict the configuration.
class ShapeError : public ConfigError {
 public:
  explicit ShapeError(const std::string& what) : ConfigError(what) {}
};

// Operation not defined for the given mode/architecture.
class UnsupportedArchitectureError : public std::runtime_error {
 public:
  explicit UnsupportedArchitectureError(const std::string& what)
      : std::runtime_error(what) {}
};

// A raw block passed to project() has (numerically) deficient column rank,
// so the nearest feasible point is not unique.
class RankDeficientError : public std::runtime_error {
 public:
  explicit RankDeficientError(const std::string& what)
      : std::runtime_error(what) {}
};

// Argument outside a model's domain of validity (e.g. distance below the
// path-loss reference distance).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside the optimizer (e.g. the power-constraint
// bisection cannot bracket). Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bdris
