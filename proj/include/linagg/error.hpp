#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace linagg {

/// Point outside the support of the design distribution.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Invalid construction parameters (even Fourier dimension, bad epsilon, ...).
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operation not defined for the given dictionary kind.
class UnsupportedError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Numerical procedure failed to meet its tolerance.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Configuration errors, one entry per offending field.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

  private:
    std::vector<std::string> errors_;
};

}  // namespace linagg
