#pragma once

#include <stdexcept>
#include <string>

namespace slogs {

/// Inconsistent or malformed configuration (grid mismatch, unknown key, bad enum).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric parameter outside its admissible range (p < 1, dt <= 0, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of a function (rho < 0).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace slogs
