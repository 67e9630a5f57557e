#include <cmath>
#include <vector>

#include "doctest.h"
#include "prandtl/base_flow.hpp"
#include "prandtl/calculus.hpp"
#include "prandtl/errors.hpp"
#include "prandtl/grid.hpp"

using namespace prandtl;

namespace {

// sign-change scan of the closed-form shear on a fine grid (oracle);
// returns the bracketing intervals [y_{i-1}, y_i]
std::vector<std::pair<double, double>> shear_zeros(const BaseFlow& flow, double x) {
  std::vector<std::pair<double, double>> roots;
  const int N = 20000;
  const double ymax = flow.ygrid->extent();
  double prev = flow.du0_dy(x, 0.0);
  for (int i = 1; i <= N; ++i) {
    const double y = ymax * i / N;
    const double cur = flow.du0_dy(x, y);
    if ((prev > 0.0 && cur <= 0.0) || (prev < 0.0 && cur >= 0.0)) roots.push_back({y - ymax / N, y});
    prev = cur;
  }
  return roots;
}

double bisect_shear(const BaseFlow& flow, double x, double lo, double hi) {
  double flo = flow.du0_dy(x, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = flow.du0_dy(x, mid);
    if ((flo > 0) == (fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("monotone_exp: shear strictly positive") {
  const BaseFlow flow = analytic_profile("monotone_exp");
  double min_shear = 1e300;
  for (int i = 0; i < flow.ygrid->count(); ++i) min_shear = std::min(min_shear, flow.du0_dy(0.0, flow.ygrid->node(i)));
  CHECK(min_shear > 0.0);
  CHECK(!flow.critical_seed.has_value());
}

TEST_CASE("critical_shear: one interior maximum-type critical point") {
  const BaseFlow flow = analytic_profile("critical_shear");
  // oracle: the shear changes sign exactly twice; only the first zero has
  // negative curvature
  const std::vector<std::pair<double, double>> zeros = shear_zeros(flow, 0.0);
  REQUIRE(zeros.size() == 2);
  const double a = bisect_shear(flow, 0.0, zeros[0].first, zeros[0].second);
  CHECK(flow.d2u0_dy2(0.0, a) < 0.0);
  CHECK(flow.u0(0.0, a) > 0.0);
  REQUIRE(flow.critical_seed.has_value());
  CHECK(*flow.critical_seed == doctest::Approx(a).epsilon(1e-8));
}

TEST_CASE("critical_xdep with zero modulation reduces to critical_shear") {
  CatalogParams p;
  p.A_amp = 0.0;
  const BaseFlow flow = analytic_profile("critical_xdep", p);
  const CriticalCurve curve = critical_point_curve(flow, *flow.critical_seed);
  for (size_t i = 1; i < curve.a.size(); ++i) CHECK(curve.a[i] == doctest::Approx(curve.a[0]).epsilon(1e-10));
}

TEST_CASE("degenerate catalog parameters are rejected") {
  CatalogParams p;
  p.A = 0.8;  // below U*decay^2: no interior critical point
  CHECK_THROWS_AS(analytic_profile("critical_shear", p), std::invalid_argument);
}

TEST_CASE("critical curve: x-independent flow keeps a(x) = a0") {
  const BaseFlow flow = analytic_profile("critical_shear");
  const CriticalCurve curve = critical_point_curve(flow, *flow.critical_seed);
  for (size_t i = 0; i < curve.a.size(); ++i) CHECK(curve.a[i] == doctest::Approx(*flow.critical_seed).epsilon(1e-10));
  CHECK(curve.C_lemma == doctest::Approx(flow.u0(0.0, curve.a[0])).epsilon(1e-12));
}

TEST_CASE("critical curve matches per-x bisection (oracle) and stays polished") {
  const BaseFlow flow = analytic_profile("critical_xdep");
  const CriticalCurve curve = critical_point_curve(flow, *flow.critical_seed);
  double shear_sup = 0.0;
  for (int i = 0; i < flow.ygrid->count(); ++i) shear_sup = std::max(shear_sup, std::abs(flow.du0_dy(0.0, flow.ygrid->node(i))));
  bool moved = false;
  for (int i = 0; i < curve.xgrid->count(); ++i) {
    const double x = curve.xgrid->node(i);
    const double a_ref = bisect_shear(flow, x, 1e-6, 1.0);
    CHECK(std::abs(curve.a[static_cast<size_t>(i)] - a_ref) < 1e-8);
    CHECK(std::abs(flow.du0_dy(x, curve.a[static_cast<size_t>(i)])) <= 1e-8 * shear_sup);
    if (std::abs(curve.a[static_cast<size_t>(i)] - curve.a[0]) > 1e-4) moved = true;
  }
  CHECK(moved);  // genuinely x-dependent
}

TEST_CASE("critical curve rejects a non-critical seed") {
  const BaseFlow flow = analytic_profile("critical_shear");
  CHECK_THROWS_AS(critical_point_curve(flow, 3.0), std::invalid_argument);
}

TEST_CASE("recover_v0 closed forms") {
  const Grid g = Grid::uniform_y(10.0, 2001);
  std::vector<double> zero(2001, 0.0), expc(2001), cst(2001, 0.7);
  for (int i = 0; i < 2001; ++i) expc[static_cast<size_t>(i)] = std::exp(-g.node(i));

  const std::vector<double> v1 = recover_v0(g.nodes(), zero);
  for (double v : v1) CHECK(v == 0.0);

  const std::vector<double> v2 = recover_v0(g.nodes(), expc);
  for (int i = 0; i < 2001; ++i)
    CHECK(v2[static_cast<size_t>(i)] == doctest::Approx(std::exp(-g.node(i)) - 1.0).epsilon(5e-6));

  const std::vector<double> v3 = recover_v0(g.nodes(), cst);
  for (int i = 0; i < 2001; ++i) CHECK(v3[static_cast<size_t>(i)] == doctest::Approx(-0.7 * g.node(i)).epsilon(1e-12));
}

namespace {

SteadyBC exp_inflow(double px) {
  SteadyBC bc;
  const int n = 401;
  bc.Y.resize(n);
  bc.u1.resize(n);
  for (int i = 0; i < n; ++i) {
    bc.Y[static_cast<size_t>(i)] = 12.0 * i / (n - 1.0);
    bc.u1[static_cast<size_t>(i)] = 1.0 - std::exp(-bc.Y[static_cast<size_t>(i)]);
  }
  bc.p_x = [px](double) { return px; };
  bc.U = [](double) { return 1.0; };
  bc.X = 1.0;
  return bc;
}

}  // namespace

TEST_CASE("Oleinik conditions: compatibility passes iff u1''(0) = p_x(0)") {
  const OleinikReport good = check_oleinik_conditions(exp_inflow(-1.0));
  CHECK(good.all_pass);

  const OleinikReport bad = check_oleinik_conditions(exp_inflow(0.0));
  CHECK(!bad.all_pass);
  bool compat_failed = false;
  for (const auto& c : bad.checks)
    if (c.name == "compatibility") compat_failed = !c.pass;
  CHECK(compat_failed);
}

TEST_CASE("Oleinik conditions: vanishing far field fails") {
  SteadyBC bc;
  const int n = 401;
  bc.Y.resize(n);
  bc.u1.resize(n);
  for (int i = 0; i < n; ++i) {
    bc.Y[static_cast<size_t>(i)] = 12.0 * i / (n - 1.0);
    bc.u1[static_cast<size_t>(i)] = bc.Y[static_cast<size_t>(i)] * std::exp(-bc.Y[static_cast<size_t>(i)]);
  }
  bc.p_x = [](double) { return 0.0; };
  bc.U = [](double) { return 0.0; };
  bc.X = 1.0;
  const OleinikReport rep = check_oleinik_conditions(bc);
  bool far_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "far_field") far_failed = !c.pass;
  CHECK(far_failed);
}

TEST_CASE("von Mises march holds an exactly stationary (linear-omega) state") {
  // u1 = s Y / 2 with U = s Y_max / 2 makes omega exactly linear in psi on
  // the truncated domain, a discrete fixed point of the marcher.
  const double s = 0.8, Ymax = 6.0;
  SteadyBC bc;
  const int n = 201;
  bc.Y.resize(n);
  bc.u1.resize(n);
  for (int i = 0; i < n; ++i) {
    bc.Y[static_cast<size_t>(i)] = Ymax * i / (n - 1.0);
    bc.u1[static_cast<size_t>(i)] = 0.5 * s * bc.Y[static_cast<size_t>(i)];
  }
  bc.p_x = [](double) { return 0.0; };
  bc.U = [=](double) { return 0.5 * s * Ymax; };
  bc.X = 0.5;
  const double psi_max = 0.25 * s * Ymax * Ymax;  // psi(Ymax) for this profile

  const MisesField mf = von_mises_march(bc, psi_max * (1.0 - 1e-12), 101, 9);
  const double U2 = bc.U(0.0) * bc.U(0.0);
  for (int j = 0; j < mf.psi_grid->count(); ++j) {
    const double w0 = mf.omega.at(0, j);
    const double wN = mf.omega.at(mf.xi_grid->count() - 1, j);
    CHECK(std::abs(wN - w0) <= 1e-8 * U2);
  }
}

TEST_CASE("von Mises march rejects a no-layer inflow") {
  SteadyBC bc;
  const int n = 201;
  bc.Y.resize(n);
  bc.u1.resize(n);
  for (int i = 0; i < n; ++i) {
    bc.Y[static_cast<size_t>(i)] = 6.0 * i / (n - 1.0);
    bc.u1[static_cast<size_t>(i)] = 1.0;  // u1(0) != 0: omega_1 = U^2 has no layer
  }
  bc.p_x = [](double) { return 0.0; };
  bc.U = [](double) { return 1.0; };
  bc.X = 0.5;
  CHECK_THROWS_AS(von_mises_march(bc, 4.0, 101, 9), ConfigError);
}

TEST_CASE("invert_von_mises: tanh round trip and xi-independent v0") {
  // forward transform of u(Y) = tanh(Y): psi = log cosh Y, so
  // Y(psi) = acosh(e^psi) and omega = tanh^2(Y(psi)).
  const int npsi = 801;
  const double psi_max = 6.0;
  MisesField mf;
  mf.psi_grid = make_grid(Grid::uniform_y(psi_max, npsi));
  mf.xi_grid = make_grid(Grid::uniform_x(1.0, 3));
  mf.U = [](double) { return 1.0; };
  mf.omega = Field2D(3, npsi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < npsi; ++j) {
      const double psi = mf.psi_grid->node(j);
      const double Y = std::acosh(std::exp(psi));
      const double t = std::tanh(Y);
      mf.omega.at(i, j) = t * t;
    }
  const BaseFlow flow = invert_von_mises(mf, 501);
  double err = 0.0, vmax = 0.0;
  for (int j = 0; j < flow.ygrid->count(); ++j) {
    const double y = flow.ygrid->node(j);
    err = std::max(err, std::abs(flow.u0(0.5, y) - std::tanh(y)));
    vmax = std::max(vmax, std::abs(flow.v0(0.5, y)));
  }
  CHECK(err < 1e-4);
  CHECK(vmax < 1e-10);

  MisesField bad = mf;
  for (int i = 0; i < 3; ++i) bad.omega.at(i, 0) = 0.5;
  CHECK_THROWS_AS(invert_von_mises(bad, 101), std::invalid_argument);
}

TEST_CASE("validate_baseflow: catalog construction checks and injected defect") {
  const BaseFlow flow = analytic_profile("critical_xdep");
  const FlowDiagnostics d = validate_baseflow(flow);
  CHECK(d.max_noslip < 1e-12);
  CHECK(d.max_incompressibility < 1e-4);
  CHECK(d.max_farfield < 1e-10);

  BaseFlow perturbed = flow;
  const double amp = 0.01;
  auto base_v0 = flow.v0;
  perturbed.v0 = [base_v0, amp](double x, double y) { return base_v0(x, y) + amp * std::sin(y); };
  const FlowDiagnostics dp = validate_baseflow(perturbed);
  double sin_sup = 0.0;
  for (int j = 0; j < flow.ygrid->count(); ++j) sin_sup = std::max(sin_sup, std::abs(std::sin(flow.ygrid->node(j))));
  CHECK(dp.max_incompressibility == doctest::Approx(amp * sin_sup).epsilon(0.02));
}
