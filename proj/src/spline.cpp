#include "prandtl/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prandtl/banded.hpp"

namespace prandtl {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)) {
  const int n = static_cast<int>(x_.size());
  if (n < 4) throw std::invalid_argument("CubicSpline: need at least 4 nodes");
  if (y.size() != x_.size()) throw std::invalid_argument("CubicSpline: size mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (!(x_[static_cast<size_t>(i)] < x_[static_cast<size_t>(i) + 1]))
      throw std::invalid_argument("CubicSpline: x must be strictly increasing");

  // Solve for second derivatives m_i; tridiagonal rows for interior nodes,
  // not-a-knot rows (third-derivative continuity across the first and last
  // interior node) at the ends.
  auto h = [&](int i) { return x_[static_cast<size_t>(i) + 1] - x_[static_cast<size_t>(i)]; };
  BandedMatrix A(n, 2, 2);
  std::vector<Complex> rhs(static_cast<size_t>(n), Complex(0.0));
  for (int i = 1; i + 1 < n; ++i) {
    A.at(i, i - 1) = h(i - 1) / 6.0;
    A.at(i, i) = (h(i - 1) + h(i)) / 3.0;
    A.at(i, i + 1) = h(i) / 6.0;
    const double d1 = (y[static_cast<size_t>(i) + 1] - y[static_cast<size_t>(i)]) / h(i);
    const double d0 = (y[static_cast<size_t>(i)] - y[static_cast<size_t>(i) - 1]) / h(i - 1);
    rhs[static_cast<size_t>(i)] = d1 - d0;
  }
  // Not-a-knot: m0/h0 - m1 (1/h0 + 1/h1) + m2/h1 = 0 and mirrored at the end.
  A.at(0, 0) = 1.0 / h(0);
  A.at(0, 1) = -(1.0 / h(0) + 1.0 / h(1));
  A.at(0, 2) = 1.0 / h(1);
  A.at(n - 1, n - 3) = 1.0 / h(n - 3);
  A.at(n - 1, n - 2) = -(1.0 / h(n - 3) + 1.0 / h(n - 2));
  A.at(n - 1, n - 1) = 1.0 / h(n - 2);

  const std::vector<Complex> m = A.factor().solve(rhs);

  a_.resize(static_cast<size_t>(n) - 1);
  b_.resize(static_cast<size_t>(n) - 1);
  c_.resize(static_cast<size_t>(n) - 1);
  d_.resize(static_cast<size_t>(n) - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double hi = h(i);
    const double mi = m[static_cast<size_t>(i)].real();
    const double mi1 = m[static_cast<size_t>(i) + 1].real();
    a_[static_cast<size_t>(i)] = y[static_cast<size_t>(i)];
    b_[static_cast<size_t>(i)] =
        (y[static_cast<size_t>(i) + 1] - y[static_cast<size_t>(i)]) / hi - hi * (2.0 * mi + mi1) / 6.0;
    c_[static_cast<size_t>(i)] = mi / 2.0;
    d_[static_cast<size_t>(i)] = (mi1 - mi) / (6.0 * hi);
  }
}

int CubicSpline::cell(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  int i = static_cast<int>(it - x_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(a_.size()) - 1);
  return i;
}

double CubicSpline::eval(double x) const {
  const int i = cell(x);
  const double t = x - x_[static_cast<size_t>(i)];
  return a_[static_cast<size_t>(i)] + t * (b_[static_cast<size_t>(i)] + t * (c_[static_cast<size_t>(i)] + t * d_[static_cast<size_t>(i)]));
}

double CubicSpline::deriv(double x, int order) const {
  const int i = cell(x);
  const double t = x - x_[static_cast<size_t>(i)];
  switch (order) {
    case 1:
      return b_[static_cast<size_t>(i)] + t * (2.0 * c_[static_cast<size_t>(i)] + 3.0 * t * d_[static_cast<size_t>(i)]);
    case 2:
      return 2.0 * c_[static_cast<size_t>(i)] + 6.0 * t * d_[static_cast<size_t>(i)];
    case 3:
      return 6.0 * d_[static_cast<size_t>(i)];
    default:
      throw std::invalid_argument("CubicSpline::deriv: order must be 1, 2 or 3");
  }
}

ComplexSpline::ComplexSpline(std::vector<double> x, const std::vector<Complex>& y) {
  std::vector<double> re(y.size()), im(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
  }
  re_ = CubicSpline(x, re);
  im_ = CubicSpline(std::move(x), im);
}

Complex ComplexSpline::eval(double x) const { return {re_.eval(x), im_.eval(x)}; }

Complex ComplexSpline::deriv(double x, int order) const { return {re_.deriv(x, order), im_.deriv(x, order)}; }

}  // namespace prandtl
