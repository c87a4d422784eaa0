#pragma once

#include <stdexcept>
#include <string>

namespace symbiotic {

/// Shapes of the operands do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A parameter or configuration value violates its documented domain.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not produce a trustworthy result
/// (singular system, divergence, failed bisection, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Complex solve hit a pivot below threshold while evaluating (jwI - A)^-1.
class NearPoleError : public NumericalError {
 public:
  NearPoleError() : NumericalError("frequency at/near system pole") {}
};

}  // namespace symbiotic
