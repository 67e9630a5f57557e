#pragma once

#include <vector>

#include "prandtl/grid.hpp"

namespace prandtl {

/// Cubic interpolating spline with not-a-knot end conditions. Evaluation
/// outside the node range extrapolates the end cubics.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double eval(double x) const;
  /// order in {1, 2, 3}; piecewise-polynomial derivative of the interpolant.
  double deriv(double x, int order) const;
  bool empty() const { return x_.empty(); }

 private:
  int cell(double x) const;
  std::vector<double> x_;
  // Per-cell coefficients: s(t) = a + b t + c t^2 + d t^3, t = x - x_[i].
  std::vector<double> a_, b_, c_, d_;
};

/// Complex-valued spline (independent real/imaginary fits).
class ComplexSpline {
 public:
  ComplexSpline() = default;
  ComplexSpline(std::vector<double> x, const std::vector<Complex>& y);
  Complex eval(double x) const;
  Complex deriv(double x, int order) const;
  bool empty() const { return re_.empty(); }

 private:
  CubicSpline re_, im_;
};

}  // namespace prandtl
