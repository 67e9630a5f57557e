#include "prandtl/newton.hpp"

#include <cmath>

namespace prandtl {

NewtonResult complex_newton(const std::function<Complex(Complex)>& residual, Complex seed, const NewtonOptions& opt) {
  NewtonResult best;
  best.root = seed;
  best.residual_abs = std::abs(residual(seed));
  if (best.residual_abs <= opt.tol) {
    best.converged = true;
    return best;
  }

  Complex tau = seed;
  double r_abs = best.residual_abs;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double h = opt.step_scale * (1.0 + std::abs(tau));
    const Complex df = (residual(tau + h) - residual(tau - h)) / (2.0 * h);
    const Complex r = residual(tau);
    r_abs = std::abs(r);
    if (r_abs < best.residual_abs) {
      best.root = tau;
      best.residual_abs = r_abs;
      best.iterations = it;
    }
    if (r_abs <= opt.tol) {
      best.converged = true;
      return best;
    }
    const double df_abs = std::abs(df);
    if (!(df_abs > 1e-300) || !std::isfinite(df_abs)) {
      best.stalled = true;
      return best;
    }
    tau -= r / df;
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
      best.stalled = true;
      return best;
    }
  }
  // Final check in case the last update landed on the root.
  r_abs = std::abs(residual(tau));
  if (r_abs < best.residual_abs) {
    best.root = tau;
    best.residual_abs = r_abs;
    best.iterations = opt.max_iter;
  }
  best.converged = best.residual_abs <= opt.tol;
  return best;
}

}  // namespace prandtl
