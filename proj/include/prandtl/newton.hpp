#pragma once

#include <functional>

#include "prandtl/grid.hpp"

namespace prandtl {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 40;
  /// Central-difference step is step_scale * (1 + |tau|).
  double step_scale = 1e-6;
};

struct NewtonResult {
  Complex root{0.0, 0.0};
  double residual_abs = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when the iteration stopped on a vanishing derivative.
  bool stalled = false;
};

/// Newton iteration on a scalar complex residual; the derivative is the
/// central complex difference along the real direction (valid for the
/// holomorphic mismatch maps used here). Non-convergence is reported in the
/// result together with the best iterate seen.
NewtonResult complex_newton(const std::function<Complex(Complex)>& residual, Complex seed,
                            const NewtonOptions& opt = {});

}  // namespace prandtl
