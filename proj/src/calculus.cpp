#include "prandtl/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

void fd_weights(double x0, std::span<const double> nodes, int order, std::span<double> w) {
  // Fornberg's recursion, all derivative orders up to `order` at once.
  const int nd = static_cast<int>(nodes.size()) - 1;
  const int m = order;
  std::vector<double> c(static_cast<size_t>((nd + 1) * (m + 1)), 0.0);
  auto C = [&](int i, int j) -> double& { return c[static_cast<size_t>(i * (m + 1) + j)]; };
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<size_t>(i)] - nodes[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  for (int i = 0; i <= nd; ++i) w[static_cast<size_t>(i)] = C(i, m);
}

namespace {

// Stencil window [lo, lo+len) for node i, clipped to the grid.
struct Window {
  int lo;
  int len;
};

Window stencil_window(int i, int n, int len) {
  int lo = i - len / 2;
  lo = std::max(0, std::min(lo, n - len));
  return {lo, len};
}

int stencil_len(int order, int i, int n) {
  switch (order) {
    case 1:
      return 3;
    case 2:
      // 4-point one-sided at the boundary keeps formal order 2 there.
      return (i == 0 || i == n - 1) ? 4 : 3;
    case 3:
      return 5;
    default:
      throw std::invalid_argument("derivative: order must be 1, 2 or 3");
  }
}

template <typename T>
std::vector<T> differentiate(std::span<const double> nodes, std::span<const T> values, int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 1 || order > 3) throw std::invalid_argument("derivative: order must be 1, 2 or 3");
  if (n < order + 2) throw std::invalid_argument("derivative: too few nodes for requested order");
  std::vector<T> out(static_cast<size_t>(n), T(0.0));
  std::vector<double> w(8);
  for (int i = 0; i < n; ++i) {
    const int len = std::min(stencil_len(order, i, n), n);
    const Window win = stencil_window(i, n, len);
    fd_weights(nodes[static_cast<size_t>(i)], nodes.subspan(static_cast<size_t>(win.lo), static_cast<size_t>(win.len)),
               order, std::span<double>(w.data(), static_cast<size_t>(win.len)));
    T acc(0.0);
    for (int k = 0; k < win.len; ++k) acc += w[static_cast<size_t>(k)] * values[static_cast<size_t>(win.lo + k)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

}  // namespace

GridFn derivative(const GridFn& f, int order) {
  std::vector<Complex> out = differentiate<Complex>(f.grid().nodes(), std::span<const Complex>(f.values()), order);
  return GridFn(f.grid_ptr(), std::move(out));
}

std::vector<double> derivative(std::span<const double> nodes, std::span<const double> values, int order) {
  return differentiate<double>(nodes, values, order);
}

GridFn cumulative_integral(const GridFn& f) {
  GridFn out(f.grid_ptr());
  Complex acc(0.0);
  out[0] = acc;
  for (int i = 1; i < f.size(); ++i) {
    acc += 0.5 * f.grid().spacing(i - 1) * (f[i - 1] + f[i]);
    out[i] = acc;
  }
  return out;
}

std::vector<double> cumulative_integral(std::span<const double> nodes, std::span<const double> values) {
  std::vector<double> out(nodes.size(), 0.0);
  double acc = 0.0;
  for (size_t i = 1; i < nodes.size(); ++i) {
    acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i - 1] + values[i]);
    out[i] = acc;
  }
  return out;
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
  double acc = 0.0;
  for (size_t i = 1; i < nodes.size(); ++i) acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i - 1] + values[i]);
  return acc;
}

}  // namespace prandtl
