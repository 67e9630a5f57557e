#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "prandtl/spectral.hpp"

namespace prandtl {

AuxiliaryEigen auxiliary_eigenproblem(double C, const GridPtr& zgrid, int n_keep) {
  if (!(C > 0.0)) throw std::invalid_argument("auxiliary_eigenproblem: C must be positive");
  const int n = zgrid->count();
  const int m = n - 2;  // Dirichlet interior
  if (m < 8) throw std::invalid_argument("auxiliary_eigenproblem: grid too small");
  const auto& z = zgrid->nodes();

  // alpha u = C * [ u''/(z^2+1) + 6z u'/(z^2+1)^2 + 6 u/(z^2+1)^2 ]
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i <= n - 2; ++i) {
    const double zi = z[static_cast<size_t>(i)];
    const double hm = z[static_cast<size_t>(i)] - z[static_cast<size_t>(i) - 1];
    const double hp = z[static_cast<size_t>(i) + 1] - z[static_cast<size_t>(i)];
    const double d2m = 2.0 / (hm * (hm + hp));
    const double d2p = 2.0 / (hp * (hm + hp));
    const double d2c = -(d2m + d2p);
    const double d1m = -hp / (hm * (hm + hp));
    const double d1p = hm / (hp * (hm + hp));
    const double d1c = (hp - hm) / (hm * hp);
    const double s1 = zi * zi + 1.0;
    const double c2 = C / s1;
    const double c1 = C * 6.0 * zi / (s1 * s1);
    const double c0 = C * 6.0 / (s1 * s1);
    const int r = i - 1;
    if (r - 1 >= 0) B(r, r - 1) = c2 * d2m + c1 * d1m;
    B(r, r) = c2 * d2c + c1 * d1c + c0;
    if (r + 1 < m) B(r, r + 1) = c2 * d2p + c1 * d1p;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(B);
  if (solver.info() != Eigen::Success) throw NumericError("auxiliary_eigenproblem: eigensolver failed");

  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(vals(a)) < std::abs(vals(b)); });

  AuxiliaryEigen out;
  out.grid = zgrid;
  const int keep = std::min(n_keep, m);
  for (int k = 0; k < keep; ++k) {
    const int idx = order[static_cast<size_t>(k)];
    out.alphas.push_back(vals(idx));
    std::vector<Complex> vec(static_cast<size_t>(n), Complex(0.0));
    for (int i = 0; i < m; ++i) vec[static_cast<size_t>(i) + 1] = solver.eigenvectors()(i, idx);
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

}  // namespace prandtl
