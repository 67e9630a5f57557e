#include "prandtl/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

LineFit fit_exponent(std::span<const double> xs, std::span<const double> log_values) {
  const size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("fit_exponent: need at least 3 samples");
  if (log_values.size() != n) throw std::invalid_argument("fit_exponent: size mismatch");
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(log_values[i]))
      throw std::invalid_argument("fit_exponent: samples must be finite");
    if (i + 1 < n && !(xs[i] < xs[i + 1])) throw std::invalid_argument("fit_exponent: xs must be strictly increasing");
  }

  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += log_values[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = log_values[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  LineFit fit;
  fit.rate = sxy / sxx;
  fit.intercept = my - fit.rate * mx;
  if (syy <= 1e-300) {
    fit.r_squared = 1.0;  // constant data: the line is exact
  } else {
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double e = log_values[i] - (fit.rate * xs[i] + fit.intercept);
      ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace prandtl
