#pragma once

#include <span>

#include "prandtl/grid.hpp"

namespace prandtl {

/// Weight spec of the exponentially weighted sup norm: alpha in the weight
/// e^{alpha y}, s the highest derivative order included (0, 1 or 2).
struct WeightSpec {
  double alpha = 0.0;
  int s = 0;
};

struct WeightedNorm {
  double value = 0.0;
  /// Set when the maximizer is the last node: the truncation may be
  /// under-resolving the weighted tail.
  bool tail_warning = false;
  int arg_node = -1;
  int arg_order = 0;

  operator double() const { return value; }
};

/// max_{j<=s} max_nodes |e^{alpha y} d^j f/dy^j| with grid-based derivatives.
/// Discrete-node sup only; no interpolation between nodes.
WeightedNorm weighted_sup_norm(const GridFn& f, const WeightSpec& w);

/// Same norm when the caller supplies the derivative samples analytically:
/// derivs[j] holds d^j f/dy^j, j = 0..s.
WeightedNorm weighted_sup_norm(std::span<const GridFn> derivs, double alpha);

}  // namespace prandtl
