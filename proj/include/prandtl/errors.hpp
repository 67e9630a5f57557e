#pragma once

#include <stdexcept>
#include <string>

namespace prandtl {

/// Bad configuration or input file (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: singular solve, unstable march, ... (CLI exit code 1).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double condition_estimate = -1.0)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace prandtl
