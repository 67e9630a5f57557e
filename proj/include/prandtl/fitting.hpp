#pragma once

#include <span>

namespace prandtl {

struct LineFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (xs, values): values ~ rate * xs + intercept.
/// Used with values = log |...| to measure growth exponents. Requires >= 3
/// finite samples and strictly increasing xs.
LineFit fit_exponent(std::span<const double> xs, std::span<const double> log_values);

}  // namespace prandtl
