#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "prandtl/banded.hpp"
#include "prandtl/calculus.hpp"
#include "prandtl/errors.hpp"
#include "prandtl/fitting.hpp"
#include "prandtl/grid.hpp"
#include "prandtl/newton.hpp"
#include "prandtl/norms.hpp"
#include "prandtl/spline.hpp"

using namespace prandtl;

namespace {
constexpr Complex kI{0.0, 1.0};
}

TEST_CASE("stretched grid: affine map when stretch is zero") {
  const Grid g = Grid::stretched_y(10.0, 21, 0.0);
  for (int i = 0; i < 21; ++i) CHECK(g.node(i) == doctest::Approx(0.5 * i).epsilon(1e-14));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(20) == 10.0);
}

TEST_CASE("stretched grid: clustering near the wall and exact map values") {
  const Grid g = Grid::stretched_y(10.0, 101, 3.0);
  CHECK(g.spacing(0) < g.spacing(99));
  // oracle: direct evaluation of the sinh map at each index
  for (int i = 0; i < 101; ++i) {
    const double zeta = i / 100.0;
    const double expect = 10.0 * std::sinh(3.0 * zeta) / std::sinh(3.0);
    if (i == 0 || i == 100) continue;  // endpoints pinned exactly
    CHECK(g.node(i) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("stretched grid: argument validation") {
  CHECK_THROWS_AS(Grid::stretched_y(-1.0, 101, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid::stretched_y(10.0, 11, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid::stretched_y(10.0, 101, -0.5), std::invalid_argument);
}

TEST_CASE("derivative: quadratic is differentiated exactly") {
  const GridPtr g = make_grid(Grid::uniform_y(10.0, 41));
  const GridFn f = GridFn::sample(g, [](double y) { return Complex(y * y); });
  const GridFn d2 = derivative(f, 2);
  for (int i = 1; i + 1 < f.size(); ++i) CHECK(d2[i].real() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("derivative: exp profile converges at second order") {
  auto max_err = [](int n) {
    const GridPtr g = make_grid(Grid::uniform_y(5.0, n));
    const GridFn f = GridFn::sample(g, [](double y) { return Complex(std::exp(-y)); });
    const GridFn d = derivative(f, 1);
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i) m = std::max(m, std::abs(d[i] + std::exp(-g->node(i))));
    return m;
  };
  const double e1 = max_err(51);
  const double e2 = max_err(101);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 3.0);  // ~4 for a second-order stencil
}

TEST_CASE("derivative: constants and validation") {
  const GridPtr g = make_grid(Grid::stretched_y(5.0, 31, 2.0));
  const GridFn f = GridFn::sample(g, [](double) { return Complex(3.5, -1.0); });
  const GridFn d = derivative(f, 1);
  for (int i = 0; i < d.size(); ++i) CHECK(std::abs(d[i]) < 1e-12);

  const GridPtr tiny = make_grid(Grid::from_nodes(GridKind::y, {0.0, 1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(derivative(GridFn(tiny), 3), std::invalid_argument);
  CHECK_THROWS_AS(derivative(f, 4), std::invalid_argument);
}

TEST_CASE("derivative: third order uses a genuine 5-point stencil") {
  const GridPtr g = make_grid(Grid::stretched_y(4.0, 81, 1.5));
  const GridFn f = GridFn::sample(g, [](double y) { return Complex(y * y * y * y); });
  const GridFn d3 = derivative(f, 3);
  for (int i = 0; i < f.size(); ++i) CHECK(d3[i].real() == doctest::Approx(24.0 * g->node(i)).epsilon(1e-8));
}

TEST_CASE("cumulative integral: closed forms") {
  const GridPtr g = make_grid(Grid::uniform_y(10.0, 11));
  const GridFn one = GridFn::sample(g, [](double) { return Complex(1.0); });
  const GridFn F1 = cumulative_integral(one);
  for (int i = 0; i < 11; ++i) CHECK(F1[i].real() == doctest::Approx(g->node(i)).epsilon(1e-14));

  const GridFn lin = GridFn::sample(g, [](double y) { return Complex(2.0 * y); });
  const GridFn F2 = cumulative_integral(lin);
  for (int i = 0; i < 11; ++i) CHECK(F2[i].real() == doctest::Approx(g->node(i) * g->node(i)).epsilon(1e-13));

  const GridFn zero(g);
  const GridFn F3 = cumulative_integral(zero);
  for (int i = 0; i < 11; ++i) CHECK(std::abs(F3[i]) == 0.0);
}

TEST_CASE("linearity of derivative and cumulative_integral") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GridPtr g = make_grid(Grid::stretched_y(8.0, 65, 2.5));
  GridFn f(g), h(g);
  for (int i = 0; i < f.size(); ++i) {
    f[i] = Complex(u(rng), u(rng));
    h[i] = Complex(u(rng), u(rng));
  }
  const Complex a(1.7, -0.3), b(-0.4, 2.2);
  for (int order = 1; order <= 3; ++order) {
    const GridFn lhs = derivative(a * GridFn(f) + b * GridFn(h), order);
    const GridFn rhs = a * derivative(f, order) + b * derivative(h, order);
    for (int i = 0; i < f.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-9 * (1.0 + std::abs(rhs[i])));
  }
  const GridFn li = cumulative_integral(a * GridFn(f) + b * GridFn(h));
  const GridFn ri = a * cumulative_integral(f) + b * cumulative_integral(h);
  for (int i = 0; i < f.size(); ++i) CHECK(std::abs(li[i] - ri[i]) < 1e-12 * (1.0 + std::abs(ri[i])));
}

TEST_CASE("derivative of cumulative integral recovers the integrand") {
  auto max_err = [](int n) {
    const GridPtr g = make_grid(Grid::uniform_y(6.0, n));
    const GridFn f = GridFn::sample(g, [](double y) { return Complex(std::sin(y), std::cos(0.5 * y)); });
    const GridFn d = derivative(cumulative_integral(f), 1);
    double m = 0.0;
    for (int i = 1; i + 1 < n; ++i) m = std::max(m, std::abs(d[i] - f[i]));
    return m;
  };
  const double e1 = max_err(101);
  const double e2 = max_err(201);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("weighted sup norm: examples and properties") {
  const GridPtr g = make_grid(Grid::uniform_y(10.0, 201));
  const GridFn f = GridFn::sample(g, [](double y) { return Complex(std::exp(-2.0 * y)); });
  const WeightedNorm n0 = weighted_sup_norm(f, {1.0, 0});
  CHECK(n0.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n0.arg_node == 0);
  CHECK(!n0.tail_warning);

  CHECK(weighted_sup_norm(GridFn(g), {2.0, 2}).value == 0.0);

  // weight exactly cancels the decay: sup sits on the last node
  const GridFn tail = GridFn::sample(g, [](double y) { return Complex(y * std::exp(-y)); });
  const WeightedNorm nt = weighted_sup_norm(tail, {1.0, 0});
  CHECK(nt.value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(nt.tail_warning);

  const GridFn mix = GridFn::sample(g, [](double y) { return Complex(std::sin(2.0 * y) * std::exp(-y), 0.3 * std::exp(-y)); });
  const double s0 = weighted_sup_norm(mix, {0.5, 0}).value;
  const double s2 = weighted_sup_norm(mix, {0.5, 2}).value;
  CHECK(s0 <= s2 + 1e-15);

  const Complex c(3.0, -4.0);
  const double hom = weighted_sup_norm(c * GridFn(mix), {0.5, 2}).value;
  CHECK(hom == doctest::Approx(std::abs(c) * s2).epsilon(1e-12));
}

TEST_CASE("solve_banded: identity, diagonal, and forward-multiply oracle") {
  const GridPtr g = make_grid(Grid::from_nodes(GridKind::y, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}));
  BandedMatrix I(8, 1, 1);
  for (int i = 0; i < 8; ++i) I.at(i, i) = 1.0;
  GridFn r(g);
  for (int i = 0; i < 8; ++i) r[i] = Complex(i, -i);
  const GridFn x = solve_banded(I, r);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(x[i] - r[i]) < 1e-14);

  BandedMatrix D(2, 0, 0);
  D.at(0, 0) = 2.0;
  D.at(1, 1) = Complex(0.0, 4.0);
  const std::vector<Complex> sol = D.factor().solve(std::vector<Complex>{Complex(2.0), Complex(0.0, 4.0)});
  CHECK(std::abs(sol[0] - 1.0) < 1e-14);
  CHECK(std::abs(sol[1] - 1.0) < 1e-14);

  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 200;
  BandedMatrix A(n, 1, 1);
  for (int i = 0; i < n; ++i) {
    A.at(i, i) = Complex(4.0 + u(rng), u(rng));  // diagonally dominant
    if (i > 0) A.at(i, i - 1) = Complex(u(rng), u(rng));
    if (i + 1 < n) A.at(i, i + 1) = Complex(u(rng), u(rng));
  }
  std::vector<Complex> known(n);
  for (int i = 0; i < n; ++i) known[i] = Complex(u(rng), u(rng));
  const std::vector<Complex> rhs = A.multiply(known);
  const std::vector<Complex> back = A.factor().solve(rhs);
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(back[i] - known[i]));
    scale = std::max(scale, std::abs(known[i]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("solve_banded: singular matrix raises with a condition estimate") {
  BandedMatrix S(3, 1, 1);
  S.at(0, 0) = 1.0;
  S.at(1, 1) = 1e-300;
  S.at(2, 2) = 1.0;
  CHECK_THROWS_AS(S.factor(), NumericError);
  try {
    S.factor();
  } catch (const NumericError& e) {
    CHECK(e.condition_estimate() >= 0.0);
    CHECK(e.condition_estimate() < 1e-14);
  }
}

TEST_CASE("complex_newton: affine, quadratic basin, and stall") {
  const NewtonResult affine = complex_newton([](Complex t) { return t - Complex(1.0, -2.0); }, Complex(0.0));
  CHECK(affine.converged);
  CHECK(std::abs(affine.root - Complex(1.0, -2.0)) < 1e-10);

  const NewtonResult quad =
      complex_newton([](Complex t) { return t * t + 1.0; }, Complex(0.1, -0.9), {1e-12, 60, 1e-7});
  CHECK(quad.converged);
  CHECK(std::abs(quad.root - Complex(0.0, -1.0)) < 1e-9);

  const NewtonResult stall = complex_newton([](Complex t) { return t * t + 1.0; }, Complex(0.0));
  CHECK(!stall.converged);
  CHECK(stall.stalled);
}

TEST_CASE("fit_exponent: exact line, constant, noisy slope") {
  std::vector<double> xs(21), ys(21);
  for (int i = 0; i < 21; ++i) {
    xs[static_cast<size_t>(i)] = 0.1 * i;
    ys[static_cast<size_t>(i)] = 2.0 * xs[static_cast<size_t>(i)] + 1.0;
  }
  const LineFit exact = fit_exponent(xs, ys);
  CHECK(exact.rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.r_squared == doctest::Approx(1.0));

  std::fill(ys.begin(), ys.end(), 4.2);
  const LineFit flat = fit_exponent(xs, ys);
  CHECK(std::abs(flat.rate) < 1e-12);

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (int i = 0; i < 21; ++i) ys[static_cast<size_t>(i)] = 3.0 * xs[static_cast<size_t>(i)] - 0.7 + noise(rng);
  const LineFit noisy = fit_exponent(xs, ys);
  CHECK(std::abs(noisy.rate - 3.0) < 1e-2);

  CHECK_THROWS_AS(fit_exponent(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("cubic spline reproduces smooth functions to interpolation order") {
  std::vector<double> x(41), y(41);
  for (int i = 0; i < 41; ++i) {
    x[static_cast<size_t>(i)] = -2.0 + 0.1 * i;
    y[static_cast<size_t>(i)] = std::sin(x[static_cast<size_t>(i)]);
  }
  const CubicSpline s(x, y);
  double err = 0.0, derr = 0.0;
  for (double t = -1.9; t < 1.9; t += 0.013) {
    err = std::max(err, std::abs(s.eval(t) - std::sin(t)));
    derr = std::max(derr, std::abs(s.deriv(t, 1) - std::cos(t)));
  }
  CHECK(err < 2e-6);
  CHECK(derr < 2e-4);

  // cubics are reproduced exactly (not-a-knot)
  for (int i = 0; i < 41; ++i) y[static_cast<size_t>(i)] = 1.0 + x[static_cast<size_t>(i)] * (2.0 + x[static_cast<size_t>(i)] * (3.0 + 0.5 * x[static_cast<size_t>(i)]));
  const CubicSpline c(x, y);
  for (double t = -2.0; t <= 2.0; t += 0.05)
    CHECK(c.eval(t) == doctest::Approx(1.0 + t * (2.0 + t * (3.0 + 0.5 * t))).epsilon(1e-10));
}
