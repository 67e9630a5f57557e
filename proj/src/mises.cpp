#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prandtl/banded.hpp"
#include "prandtl/base_flow.hpp"
#include "prandtl/calculus.hpp"
#include "prandtl/errors.hpp"

namespace prandtl {

namespace {

// First-cell part of Y = int dpsi/sqrt(omega) with omega ~ c1 psi + c2 psi^2;
// the 1/sqrt(psi) singularity is integrable and has a closed form.
double first_cell_Y(double c1, double c2, double psi1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("invert_von_mises: wall slope of omega must be positive");
  const double q = c2 * psi1 / c1;
  if (std::abs(q) < 1e-8) return 2.0 * std::sqrt(psi1 / c1) * (1.0 - q / 6.0);
  if (c2 > 0.0) return 2.0 / std::sqrt(c2) * std::asinh(std::sqrt(c2 * psi1 / c1));
  const double arg = std::sqrt(-c2 * psi1 / c1);
  if (arg >= 1.0) throw std::invalid_argument("invert_von_mises: omega loses positivity inside the first cell");
  return 2.0 / std::sqrt(-c2) * std::asin(arg);
}

}  // namespace

MisesField von_mises_march(const SteadyBC& bc, double psi_max, int n_psi, int n_xi_out, bool force) {
  if (n_psi < 16) throw std::invalid_argument("von_mises_march: n_psi too small");
  if (n_xi_out < 2) throw std::invalid_argument("von_mises_march: n_xi_out too small");
  if (!(bc.X > 0.0)) throw std::invalid_argument("von_mises_march: horizon X must be positive");

  const OleinikReport rep = check_oleinik_conditions(bc);
  if (!rep.all_pass && !force) {
    std::string failed;
    for (const auto& c : rep.checks)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    throw ConfigError("von_mises_march: Oleinik conditions failed: " + failed);
  }

  // omega_1 on the psi grid from the inflow profile: psi(Y) = int u1,
  // omega_1(psi(Y)) = u1(Y)^2.
  const std::vector<double> psi_of_Y = cumulative_integral(bc.Y, bc.u1);
  if (psi_max > psi_of_Y.back())
    throw ConfigError("von_mises_march: psi_max exceeds the inflow stream function range");
  std::vector<double> w2(bc.u1.size());
  for (size_t i = 0; i < bc.u1.size(); ++i) w2[i] = bc.u1[i] * bc.u1[i];
  // psi_of_Y is strictly increasing off the wall (u1 > 0); drop duplicate wall entries.
  CubicSpline omega1_spline(psi_of_Y, w2);

  GridPtr psi_grid = make_grid(Grid::uniform_y(psi_max, n_psi));
  const double dpsi = psi_grid->spacing(0);
  std::vector<double> omega(static_cast<size_t>(n_psi));
  for (int j = 0; j < n_psi; ++j) omega[static_cast<size_t>(j)] = std::max(0.0, omega1_spline.eval(psi_grid->node(j)));
  omega[0] = 0.0;

  double U_sup = 0.0;
  for (int s = 0; s <= 64; ++s) U_sup = std::max(U_sup, std::abs(bc.U(bc.xi0 + bc.X * s / 64.0)));
  const double omega_cap = std::max(*std::max_element(omega.begin(), omega.end()), U_sup * U_sup);

  // Frozen-coefficient implicit diffusion: sqrt(omega) from the previous
  // slice, d2_psi implicit, 2 p_xi explicit.
  const double dxi_cap = 0.25 * dpsi * dpsi / std::max(std::sqrt(omega_cap), 1e-12);
  // Round the step count up to a multiple of the output slice count so every
  // stored slice sits exactly on a step.
  const int per_slice = std::max(1, static_cast<int>(std::ceil(bc.X / dxi_cap / (n_xi_out - 1))));
  const int n_steps = per_slice * (n_xi_out - 1);
  const double dxi = bc.X / n_steps;

  MisesField mf;
  mf.psi_grid = psi_grid;
  mf.U = bc.U;
  mf.omega = Field2D(n_xi_out, n_psi);
  std::vector<double> xi_nodes(static_cast<size_t>(n_xi_out));
  for (int i = 0; i < n_xi_out; ++i) xi_nodes[static_cast<size_t>(i)] = bc.X * i / (n_xi_out - 1);
  mf.xi_grid = make_grid(Grid::from_nodes(GridKind::x, xi_nodes));

  const double wall_slope0 = omega[1] / dpsi;
  int out_idx = 0;
  auto store_slice = [&](int step) {
    while (out_idx < n_xi_out && step >= out_idx * per_slice) {
      for (int j = 0; j < n_psi; ++j) mf.omega.at(out_idx, j) = omega[static_cast<size_t>(j)];
      ++out_idx;
    }
  };
  store_slice(0);

  for (int step = 1; step <= n_steps; ++step) {
    const double xi_new = bc.xi0 + dxi * step;
    const double xi_mid = xi_new - 0.5 * dxi;

    BandedMatrix A(n_psi, 1, 1);
    std::vector<Complex> rhs(static_cast<size_t>(n_psi));
    A.at(0, 0) = 1.0;
    rhs[0] = 0.0;
    A.at(n_psi - 1, n_psi - 1) = 1.0;
    const double Unew = bc.U(xi_new);
    rhs[static_cast<size_t>(n_psi) - 1] = Unew * Unew;
    for (int j = 1; j + 1 < n_psi; ++j) {
      const double root = std::sqrt(std::max(omega[static_cast<size_t>(j)], 0.0));
      const double r = dxi * root / (dpsi * dpsi);
      A.at(j, j - 1) = -r;
      A.at(j, j) = 1.0 + 2.0 * r;
      A.at(j, j + 1) = -r;
      rhs[static_cast<size_t>(j)] = omega[static_cast<size_t>(j)] - 2.0 * dxi * bc.p_x(xi_mid);
    }
    const std::vector<Complex> sol = A.factor().solve(rhs);

    double min_w = 0.0, max_w = 0.0;
    for (int j = 0; j < n_psi; ++j) {
      const double w = sol[static_cast<size_t>(j)].real();
      min_w = std::min(min_w, w);
      max_w = std::max(max_w, w);
      omega[static_cast<size_t>(j)] = std::max(w, 0.0);
    }
    if (min_w < -1e-8 * omega_cap)
      throw NumericError("von_mises_march: omega went negative (min=" + std::to_string(min_w) +
                         "); reduce the xi step");
    if (max_w > omega_cap * (1.0 + 1e-6))
      throw NumericError("von_mises_march: comparison principle violated (max=" + std::to_string(max_w) + ")");

    if (omega[1] / dpsi < 1e-3 * wall_slope0) {
      mf.separated = true;
      mf.separation_xi = dxi * step;
      store_slice(step);
      // Freeze remaining output slices at the separation profile.
      while (out_idx < n_xi_out) {
        for (int j = 0; j < n_psi; ++j) mf.omega.at(out_idx, j) = omega[static_cast<size_t>(j)];
        ++out_idx;
      }
      return mf;
    }
    store_slice(step);
  }
  return mf;
}

BaseFlow invert_von_mises(const MisesField& mf, int ny_out) {
  const int nxi = mf.xi_grid->count();
  const int npsi = mf.psi_grid->count();
  const auto& psi = mf.psi_grid->nodes();

  for (int i = 0; i < nxi; ++i) {
    if (std::abs(mf.omega.at(i, 0)) > 1e-8 * std::max(1.0, mf.omega.at(i, npsi - 1)))
      throw std::invalid_argument("invert_von_mises: omega(xi, 0) must vanish");
    for (int j = 1; j < npsi; ++j)
      if (!(mf.omega.at(i, j) > 0.0))
        throw std::invalid_argument("invert_von_mises: omega must be positive for psi > 0");
  }

  // Per-slice physical height Y(psi) and u = sqrt(omega).
  std::vector<std::vector<double>> Ys(static_cast<size_t>(nxi));
  std::vector<std::vector<double>> us(static_cast<size_t>(nxi));
  double y_reach = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nxi; ++i) {
    std::vector<double> Y(static_cast<size_t>(npsi), 0.0);
    std::vector<double> u(static_cast<size_t>(npsi), 0.0);
    const double w1 = mf.omega.at(i, 1), w2 = mf.omega.at(i, 2);
    const double p1 = psi[1], p2 = psi[2];
    const double det = p1 * p2 * p2 - p2 * p1 * p1;
    const double c1 = (w1 * p2 * p2 - w2 * p1 * p1) / det;
    const double c2 = (w2 * p1 - w1 * p2) / det;
    Y[1] = first_cell_Y(c1, c2, p1);
    // Remaining cells in the s = sqrt(psi) variable, where the integrand
    // 2s/sqrt(omega(s^2)) is smooth through the wall region.
    for (int j = 2; j < npsi; ++j) {
      const double sa = std::sqrt(psi[static_cast<size_t>(j) - 1]);
      const double sb = std::sqrt(psi[static_cast<size_t>(j)]);
      const double ga = 2.0 * sa / std::sqrt(mf.omega.at(i, j - 1));
      const double gb = 2.0 * sb / std::sqrt(mf.omega.at(i, j));
      Y[static_cast<size_t>(j)] = Y[static_cast<size_t>(j) - 1] + 0.5 * (sb - sa) * (ga + gb);
    }
    for (int j = 1; j < npsi; ++j) u[static_cast<size_t>(j)] = std::sqrt(mf.omega.at(i, j));
    y_reach = std::min(y_reach, Y.back());
    Ys[static_cast<size_t>(i)] = std::move(Y);
    us[static_cast<size_t>(i)] = std::move(u);
  }

  BaseFlow flow;
  flow.name = "von_mises";
  flow.xgrid = mf.xi_grid;
  flow.ygrid = make_grid(Grid::uniform_y(0.999 * y_reach, ny_out));
  flow.p_x = [](double) { return 0.0; };
  flow.U_far = mf.U;
  flow.x_independent = false;

  auto slices = std::make_shared<std::vector<CubicSpline>>();
  slices->reserve(static_cast<size_t>(nxi));
  for (int i = 0; i < nxi; ++i) slices->emplace_back(Ys[static_cast<size_t>(i)], us[static_cast<size_t>(i)]);

  const GridPtr xg = mf.xi_grid;
  auto locate = [xg](double x) {
    const auto& xs = xg->nodes();
    int hi = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    hi = std::clamp(hi, 1, static_cast<int>(xs.size()) - 1);
    const double t = (x - xs[static_cast<size_t>(hi) - 1]) / (xs[static_cast<size_t>(hi)] - xs[static_cast<size_t>(hi) - 1]);
    return std::pair<int, double>(hi, std::clamp(t, 0.0, 1.0));
  };
  auto blend = [slices, locate](double x, double y, int order) {
    const auto [hi, t] = locate(x);
    const CubicSpline& lo = (*slices)[static_cast<size_t>(hi) - 1];
    const CubicSpline& up = (*slices)[static_cast<size_t>(hi)];
    const double a = order == 0 ? lo.eval(y) : lo.deriv(y, order);
    const double b = order == 0 ? up.eval(y) : up.deriv(y, order);
    return (1.0 - t) * a + t * b;
  };

  flow.u0 = [blend](double x, double y) { return blend(x, y, 0); };
  flow.du0_dy = [blend](double x, double y) { return blend(x, y, 1); };
  flow.d2u0_dy2 = [blend](double x, double y) { return blend(x, y, 2); };
  flow.d3u0_dy3 = [blend](double x, double y) { return blend(x, y, 3); };

  // d/dx by centered differences across slices; v0 from incompressibility.
  auto dudx = [slices, xg, locate](double x, double y) {
    const auto& xs = xg->nodes();
    const auto [hi, t] = locate(x);
    (void)t;
    const int i1 = hi, i0 = hi - 1;
    return ((*slices)[static_cast<size_t>(i1)].eval(y) - (*slices)[static_cast<size_t>(i0)].eval(y)) /
           (xs[static_cast<size_t>(i1)] - xs[static_cast<size_t>(i0)]);
  };
  flow.du0_dx = dudx;
  flow.dxy_u0 = [slices, xg, locate](double x, double y) {
    const auto& xs = xg->nodes();
    const auto [hi, t] = locate(x);
    (void)t;
    const int i1 = hi, i0 = hi - 1;
    return ((*slices)[static_cast<size_t>(i1)].deriv(y, 1) - (*slices)[static_cast<size_t>(i0)].deriv(y, 1)) /
           (xs[static_cast<size_t>(i1)] - xs[static_cast<size_t>(i0)]);
  };

  const GridPtr yg = flow.ygrid;
  auto v0_tab = std::make_shared<Field2D>(nxi, ny_out);
  for (int i = 0; i < nxi; ++i) {
    std::vector<double> dux(static_cast<size_t>(ny_out));
    for (int j = 0; j < ny_out; ++j) dux[static_cast<size_t>(j)] = dudx(xg->node(i), yg->node(j));
    const std::vector<double> v = recover_v0(yg->nodes(), dux);
    for (int j = 0; j < ny_out; ++j) v0_tab->at(i, j) = v[static_cast<size_t>(j)];
  }
  flow.v0 = [v0_tab, yg, locate](double x, double y) {
    const auto [hi, t] = locate(x);
    const auto& yn = yg->nodes();
    int jy = static_cast<int>(std::upper_bound(yn.begin(), yn.end(), y) - yn.begin());
    jy = std::clamp(jy, 1, static_cast<int>(yn.size()) - 1);
    const double s = std::clamp((y - yn[static_cast<size_t>(jy) - 1]) /
                                    (yn[static_cast<size_t>(jy)] - yn[static_cast<size_t>(jy) - 1]),
                                0.0, 1.0);
    auto val = [&](int ix) {
      return (1.0 - s) * v0_tab->at(ix, jy - 1) + s * v0_tab->at(ix, jy);
    };
    return (1.0 - t) * val(hi - 1) + t * val(hi);
  };
  return flow;
}

}  // namespace prandtl
