#pragma once

#include <span>
#include <vector>

#include "prandtl/grid.hpp"

namespace prandtl {

/// Finite-difference weights (Fornberg) for the m-th derivative at x0 from
/// the given stencil nodes. w.size() == nodes.size(); exact for polynomials
/// of degree < nodes.size().
void fd_weights(double x0, std::span<const double> nodes, int order, std::span<double> w);

/// Finite-difference derivative of formal order >= 2 on a (possibly
/// nonuniform) grid; one-sided stencils at the endpoints. order in {1,2,3};
/// the third derivative uses a dedicated 5-point stencil.
GridFn derivative(const GridFn& f, int order);

/// Real-field variant used by the base-flow tables.
std::vector<double> derivative(std::span<const double> nodes, std::span<const double> values, int order);

/// F(y_j) = integral of f from node 0 to node j by composite trapezoid; F(0) = 0.
GridFn cumulative_integral(const GridFn& f);
std::vector<double> cumulative_integral(std::span<const double> nodes, std::span<const double> values);

/// Trapezoid value of the full integral over the grid.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

}  // namespace prandtl
