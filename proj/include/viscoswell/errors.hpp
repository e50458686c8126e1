#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace viscoswell {

/// Failure category, mapped one-to-one onto CLI exit codes.
enum class ErrorCategory {
  Config = 2,
  Numeric = 3,
  NonConvergence = 4,
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Invalid parameter or configuration value. `field()` names the offending key.
class ConfigError : public SimulationError {
 public:
  ConfigError(std::string field, const std::string& what)
      : SimulationError(ErrorCategory::Config, field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// NaN/Inf or other non-finite evaluation at a grid node.
class NumericError : public SimulationError {
 public:
  static constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

  explicit NumericError(const std::string& what, std::size_t node = kNoNode)
      : SimulationError(ErrorCategory::Numeric, what), node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// No sign change of the boundary residual inside the search bracket.
class BoundaryError : public SimulationError {
 public:
  explicit BoundaryError(const std::string& what)
      : SimulationError(ErrorCategory::Numeric, what) {}
};

/// Staggered inner loop exhausted its iteration budget.
class NonConvergenceError : public SimulationError {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : SimulationError(ErrorCategory::NonConvergence, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace viscoswell
