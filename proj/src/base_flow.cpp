#include "prandtl/base_flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "prandtl/calculus.hpp"
#include "prandtl/errors.hpp"
#include "prandtl/fitting.hpp"

namespace prandtl {

Field2D BaseFlow::sample(const ScalarFn2& f) const {
  Field2D out(xgrid->count(), ygrid->count());
  for (int ix = 0; ix < out.nx; ++ix)
    for (int iy = 0; iy < out.ny; ++iy) out.at(ix, iy) = f(xgrid->node(ix), ygrid->node(iy));
  return out;
}

double BaseFlow::min_u0_interior() const {
  double m = std::numeric_limits<double>::infinity();
  for (int ix = 0; ix < xgrid->count(); ++ix)
    for (int iy = 1; iy < ygrid->count(); ++iy) m = std::min(m, u0(xgrid->node(ix), ygrid->node(iy)));
  return m;
}

namespace {

double interp_on(const GridPtr& xg, const std::vector<double>& v, double x) {
  const auto& nodes = xg->nodes();
  if (x <= nodes.front()) return v.front();
  if (x >= nodes.back()) return v.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const size_t hi = static_cast<size_t>(it - nodes.begin());
  const double t = (x - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
  return (1.0 - t) * v[hi - 1] + t * v[hi];
}

}  // namespace

double CriticalCurve::a_at(double x) const { return interp_on(xgrid, a, x); }
double CriticalCurve::mu_at(double x) const { return interp_on(xgrid, mu, x); }
double CriticalCurve::ua_at(double x) const { return interp_on(xgrid, ua, x); }

// ---------------------------------------------------------------------------
// Analytic catalog
// ---------------------------------------------------------------------------

BaseFlow analytic_profile(const std::string& name, const CatalogParams& p) {
  if (!(p.U > 0.0) || !(p.decay > 0.0)) throw std::invalid_argument("analytic_profile: U and decay must be positive");
  BaseFlow flow;
  flow.name = name;
  flow.xgrid = make_grid(Grid::uniform_x(p.x_end, p.nx));
  flow.ygrid = make_grid(Grid::stretched_y(p.y_max, p.ny, p.stretch));
  flow.p_x = [](double) { return 0.0; };
  flow.U_far = [U = p.U](double) { return U; };
  flow.alpha_decay = p.decay;

  const double U = p.U, lam = p.decay;

  if (name == "monotone_exp") {
    flow.x_independent = true;
    flow.u0 = [=](double, double y) { return U * (1.0 - std::exp(-lam * y)); };
    flow.du0_dy = [=](double, double y) { return U * lam * std::exp(-lam * y); };
    flow.d2u0_dy2 = [=](double, double y) { return -U * lam * lam * std::exp(-lam * y); };
    flow.d3u0_dy3 = [=](double, double y) { return U * lam * lam * lam * std::exp(-lam * y); };
    flow.du0_dx = [](double, double) { return 0.0; };
    flow.dxy_u0 = [](double, double) { return 0.0; };
    flow.v0 = [](double, double) { return 0.0; };
    return flow;
  }

  if (name != "critical_shear" && name != "critical_xdep")
    throw std::invalid_argument("analytic_profile: unknown catalog name '" + name + "'");

  // u0 = U(1 - e^{-lam y}) - A(x) y^2 e^{-lam y}; the dip generates the
  // non-degenerate critical point on dy u0 when A > U lam^2.
  const bool xdep = (name == "critical_xdep");
  const double A0 = p.A;
  const double amp = xdep ? p.A_amp : 0.0;
  if (!(A0 > U * lam * lam))
    throw std::invalid_argument("analytic_profile: degenerate critical point (need A > U*decay^2)");

  auto Ax = [=](double x) { return A0 * (1.0 + amp * std::tanh(x)); };
  auto dAx = [=](double x) {
    const double c = std::cosh(x);
    return A0 * amp / (c * c);
  };

  flow.x_independent = !xdep;
  flow.u0 = [=](double x, double y) {
    const double e = std::exp(-lam * y);
    return U * (1.0 - e) - Ax(x) * y * y * e;
  };
  flow.du0_dy = [=](double x, double y) {
    const double e = std::exp(-lam * y);
    return e * (U * lam - Ax(x) * (2.0 * y - lam * y * y));
  };
  flow.d2u0_dy2 = [=](double x, double y) {
    const double e = std::exp(-lam * y);
    return e * (-U * lam * lam - Ax(x) * (2.0 - 4.0 * lam * y + lam * lam * y * y));
  };
  flow.d3u0_dy3 = [=](double x, double y) {
    const double e = std::exp(-lam * y);
    return e * (U * lam * lam * lam + Ax(x) * (6.0 * lam - 6.0 * lam * lam * y + lam * lam * lam * y * y));
  };
  flow.du0_dx = [=](double x, double y) { return -dAx(x) * y * y * std::exp(-lam * y); };
  flow.dxy_u0 = [=](double x, double y) { return -dAx(x) * (2.0 * y - lam * y * y) * std::exp(-lam * y); };
  // v0 = -int_0^y du0_dx = dA(x) * int_0^y y'^2 e^{-lam y'} dy' in closed form.
  flow.v0 = [=](double x, double y) {
    const double e = std::exp(-lam * y);
    const double integral =
        2.0 / (lam * lam * lam) - e * (y * y / lam + 2.0 * y / (lam * lam) + 2.0 / (lam * lam * lam));
    return dAx(x) * integral;
  };

  const double s = std::sqrt(1.0 - U * lam * lam / A0);
  flow.critical_seed = (1.0 - s) / lam;
  const double a0 = *flow.critical_seed;
  if (!(flow.u0(0.0, a0) > 0.0))
    throw std::invalid_argument("analytic_profile: u0 at the critical point must be positive");
  return flow;
}

// ---------------------------------------------------------------------------
// Critical-point curve
// ---------------------------------------------------------------------------

CriticalCurve critical_point_curve(const BaseFlow& flow, double a0) {
  double shear_scale = 0.0;
  for (int iy = 0; iy < flow.ygrid->count(); ++iy)
    shear_scale = std::max(shear_scale, std::abs(flow.du0_dy(0.0, flow.ygrid->node(iy))));
  if (shear_scale <= 0.0) throw std::invalid_argument("critical_point_curve: flat profile");

  if (std::abs(flow.du0_dy(0.0, a0)) > 1e-4 * shear_scale)
    throw std::invalid_argument("critical_point_curve: a0 is not a critical point of u0|x=0");
  if (!(flow.d2u0_dy2(0.0, a0) < 0.0))
    throw std::invalid_argument("critical_point_curve: need d2y u0(0, a0) < 0");

  const double d2_scale = std::abs(flow.d2u0_dy2(0.0, a0));

  auto polish = [&](double x, double a) {
    for (int it = 0; it < 30; ++it) {
      const double g = flow.du0_dy(x, a);
      if (std::abs(g) <= 1e-13 * shear_scale) break;
      const double dg = flow.d2u0_dy2(x, a);
      if (std::abs(dg) < 1e-8 * d2_scale) throw NumericError("critical_point_curve: Newton degenerate");
      a -= g / dg;
    }
    return a;
  };

  CriticalCurve curve;
  curve.xgrid = flow.xgrid;
  const int nx = flow.xgrid->count();
  curve.a.resize(static_cast<size_t>(nx));
  curve.mu.resize(static_cast<size_t>(nx));
  curve.ua.resize(static_cast<size_t>(nx));

  double a = polish(0.0, a0);
  for (int i = 0; i < nx; ++i) {
    const double x = flow.xgrid->node(i);
    if (i > 0) {
      // dxy u0 + d2y u0 * a'(x) = 0 supplies the predictor; Newton polishing
      // at the new station removes the marching error.
      const double xp = flow.xgrid->node(i - 1);
      const double dx = x - xp;
      const double slope = -flow.dxy_u0(xp, a) / flow.d2u0_dy2(xp, a);
      try {
        a = polish(x, a + dx * slope);
      } catch (const NumericError&) {
        throw NumericError("critical_point_curve: degeneracy along the curve; last valid x = " + std::to_string(xp));
      }
    }
    const double d2 = flow.d2u0_dy2(x, a);
    if (!(d2 < 0.0) || std::abs(d2) < 1e-3 * d2_scale)
      throw NumericError("critical_point_curve: degeneracy along the curve; last valid x = " +
                         std::to_string(i > 0 ? flow.xgrid->node(i - 1) : 0.0));
    const double u_here = flow.u0(x, a);
    if (!(u_here > 0.0))
      throw NumericError("critical_point_curve: u0(x, a(x)) <= 0 at x = " + std::to_string(x));
    curve.a[static_cast<size_t>(i)] = a;
    curve.mu[static_cast<size_t>(i)] = std::sqrt(-d2);
    curve.ua[static_cast<size_t>(i)] = u_here;
  }
  curve.C_lemma = curve.ua.front();
  return curve;
}

// ---------------------------------------------------------------------------
// Oleinik condition report
// ---------------------------------------------------------------------------

OleinikReport check_oleinik_conditions(const SteadyBC& bc) {
  OleinikReport rep;
  const size_t n = bc.Y.size();
  if (n < 8 || bc.u1.size() != n) throw std::invalid_argument("check_oleinik_conditions: bad inflow profile");

  const std::vector<double> du1 = derivative(bc.Y, bc.u1, 1);
  const std::vector<double> d2u1 = derivative(bc.Y, bc.u1, 2);
  const double u_scale = *std::max_element(bc.u1.begin(), bc.u1.end());
  const double px0 = bc.p_x(bc.xi0);
  const double U0 = bc.U(bc.xi0);

  auto add = [&](const std::string& name, bool pass, double measured, const std::string& detail) {
    rep.checks.push_back({name, pass, measured, detail});
  };

  double min_pos = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < n; ++i) min_pos = std::min(min_pos, bc.u1[i]);
  add("u1_positive", min_pos > 0.0, min_pos, "min u1 over Y>0");

  add("no_slip", std::abs(bc.u1[0]) <= 1e-8 * std::max(u_scale, 1e-300), bc.u1[0], "u1(0)");

  add("wall_shear", du1[0] > 0.0, du1[0], "u1'(0)");

  const bool far_ok = std::abs(U0) > 0.0 && std::abs(bc.u1[n - 1] - U0) <= 5e-3 * std::abs(U0);
  add("far_field", far_ok, bc.u1[n - 1] - U0, "u1(Y_max) - U(0), and U(0) != 0");

  const double compat = d2u1[0] - px0;
  add("compatibility", std::abs(compat) <= 5e-3 * (1.0 + std::abs(px0)), compat, "u1''(0) - p_x(0)");

  // Fitted K in |u1''(Y) - p_x(0)| <= K Y^2 near the wall (reported only).
  double K = 0.0;
  for (size_t i = 1; i < n && bc.Y[i] <= 1.0; ++i) K = std::max(K, std::abs(d2u1[i] - px0) / (bc.Y[i] * bc.Y[i]));
  rep.checks.back().detail += "; K_fit=" + std::to_string(K);

  // Optional decay fit |u1'(Y)| <= m1 e^{-m2 Y}.
  std::vector<double> ys, logs;
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(du1[i]) > 1e-14 * u_scale) {
      ys.push_back(bc.Y[i]);
      logs.push_back(std::log(std::abs(du1[i])));
    }
  }
  if (ys.size() >= 3) {
    const LineFit fit = fit_exponent(ys, logs);
    rep.m2 = -fit.rate;
    rep.m1 = std::exp(fit.intercept);
    rep.decay_r2 = fit.r_squared;
  }

  rep.all_pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const ConditionCheck& c) { return c.pass; });
  return rep;
}

// ---------------------------------------------------------------------------
// Incompressibility and validation
// ---------------------------------------------------------------------------

std::vector<double> recover_v0(std::span<const double> ynodes, std::span<const double> du0_dx_col) {
  std::vector<double> v0 = cumulative_integral(ynodes, du0_dx_col);
  for (double& v : v0) v = -v;
  return v0;
}

FlowDiagnostics validate_baseflow(const BaseFlow& flow) {
  FlowDiagnostics d;
  const int nx = flow.xgrid->count();
  const int ny = flow.ygrid->count();
  const auto& yn = flow.ygrid->nodes();

  for (int ix = 0; ix < nx; ++ix) {
    const double x = flow.xgrid->node(ix);
    d.max_noslip = std::max({d.max_noslip, std::abs(flow.u0(x, 0.0)), std::abs(flow.v0(x, 0.0))});
    d.max_farfield = std::max(d.max_farfield, std::abs(flow.u0(x, flow.ygrid->extent()) - flow.U_far(x)));

    std::vector<double> dux(static_cast<size_t>(ny));
    for (int iy = 0; iy < ny; ++iy) dux[static_cast<size_t>(iy)] = flow.du0_dx(x, yn[static_cast<size_t>(iy)]);
    const std::vector<double> v0_ref = recover_v0(yn, dux);

    for (int iy = 0; iy < ny; ++iy) {
      const double y = yn[static_cast<size_t>(iy)];
      const double res =
          flow.u0(x, y) * flow.du0_dx(x, y) + flow.v0(x, y) * flow.du0_dy(x, y) + flow.p_x(x) - flow.d2u0_dy2(x, y);
      d.max_steady_residual = std::max(d.max_steady_residual, std::abs(res));
      d.max_incompressibility = std::max(d.max_incompressibility, std::abs(flow.v0(x, y) - v0_ref[static_cast<size_t>(iy)]));
    }

    // Tail still growing linearly => v0 = O(y) signature.
    const double ymax = flow.ygrid->extent();
    const double g1 = flow.v0(x, ymax) - flow.v0(x, 0.9 * ymax);
    const double g0 = flow.v0(x, 0.9 * ymax) - flow.v0(x, 0.8 * ymax);
    if (std::abs(g1) > 1e-10 && std::abs(g0) > 1e-12 && std::abs(g1 / g0 - 1.0) < 0.2) d.v0_linear_growth = true;
  }
  return d;
}

// ---------------------------------------------------------------------------
// I/O
// ---------------------------------------------------------------------------

SteadyBC load_inflow_csv(const std::string& path, double px_value, double U_value, double X) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open inflow profile: " + path);
  SteadyBC bc;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double y, u;
    if (ss >> y >> u) {
      bc.Y.push_back(y);
      bc.u1.push_back(u);
    }
    // non-numeric rows (headers) are skipped
  }
  if (bc.Y.size() < 8) throw ConfigError("inflow profile too short: " + path);
  bc.p_x = [px_value](double) { return px_value; };
  bc.U = [U_value](double) { return U_value; };
  bc.X = X;
  return bc;
}

void export_baseflow_csv(const BaseFlow& flow, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "x,y,u0,v0,du0_dy,d2u0_dy2\n";
  out.precision(17);
  for (int ix = 0; ix < flow.xgrid->count(); ++ix) {
    const double x = flow.xgrid->node(ix);
    for (int iy = 0; iy < flow.ygrid->count(); ++iy) {
      const double y = flow.ygrid->node(iy);
      out << x << ',' << y << ',' << flow.u0(x, y) << ',' << flow.v0(x, y) << ',' << flow.du0_dy(x, y) << ','
          << flow.d2u0_dy2(x, y) << '\n';
    }
  }
}

}  // namespace prandtl
