#include "prandtl/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "prandtl/calculus.hpp"

namespace prandtl {

namespace {

void fold_in(WeightedNorm& acc, const GridFn& f, double alpha, int order) {
  const int n = f.size();
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(alpha * f.grid().node(i)) * std::abs(f[i]);
    if (v > acc.value) {
      acc.value = v;
      acc.arg_node = i;
      acc.arg_order = order;
      acc.tail_warning = (i == n - 1);
    }
  }
}

}  // namespace

WeightedNorm weighted_sup_norm(const GridFn& f, const WeightSpec& w) {
  if (w.alpha < 0.0) throw std::invalid_argument("weighted_sup_norm: alpha must be >= 0");
  if (w.s < 0 || w.s > 2) throw std::invalid_argument("weighted_sup_norm: s must be 0, 1 or 2");
  WeightedNorm acc;
  fold_in(acc, f, w.alpha, 0);
  for (int j = 1; j <= w.s; ++j) fold_in(acc, derivative(f, j), w.alpha, j);
  return acc;
}

WeightedNorm weighted_sup_norm(std::span<const GridFn> derivs, double alpha) {
  WeightedNorm acc;
  for (size_t j = 0; j < derivs.size(); ++j) fold_in(acc, derivs[j], alpha, static_cast<int>(j));
  return acc;
}

}  // namespace prandtl
