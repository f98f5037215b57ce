#pragma once

#include <stdexcept>
#include <string>

namespace dopt {

/// Argument outside the domain of a function (negative type, action below s_l, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A quadrature, root finder or minimizer did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid model parameters, distribution or configuration file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Two mathematically equivalent routes disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Types below this are treated as zero (the bottom of the type support).
inline constexpr double kEffectiveZero = 1e-6;

}  // namespace dopt
