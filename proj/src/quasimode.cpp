#include "prandtl/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prandtl/calculus.hpp"
#include "prandtl/errors.hpp"
#include "prandtl/fitting.hpp"
#include "prandtl/parallel.hpp"

namespace prandtl {

namespace {
constexpr Complex kI{0.0, 1.0};
}

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

Cutoff::Cutoff(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(0.0 < inner && inner < outer)) throw std::invalid_argument("Cutoff: need 0 < inner < outer");
}

double Cutoff::operator()(double r, int order) const {
  const double t = std::abs(r);
  if (t <= inner_ || t >= outer_) return order == 0 ? (t <= inner_ ? 1.0 : 0.0) : 0.0;
  const double L = outer_ - inner_;
  const double w = (t - inner_) / L;
  // 9th-order smoothstep: C^4 at both ends.
  double s;
  switch (order) {
    case 0:
      s = w * w * w * w * w * (126.0 + w * (-420.0 + w * (540.0 + w * (-315.0 + w * 70.0))));
      return 1.0 - s;
    case 1:
      s = w * w * w * w * (630.0 + w * (-2520.0 + w * (3780.0 + w * (-2520.0 + w * 630.0))));
      return -s / L * (r < 0.0 ? -1.0 : 1.0);
    case 2:
      s = w * w * w * (2520.0 + w * (-12600.0 + w * (22680.0 + w * (-17640.0 + w * 5040.0))));
      return -s / (L * L);
    case 3:
      s = w * w * (7560.0 + w * (-50400.0 + w * (113400.0 + w * (-105840.0 + w * 35280.0))));
      return -s / (L * L * L) * (r < 0.0 ? -1.0 : 1.0);
    default:
      throw std::invalid_argument("Cutoff: order must be 0..3");
  }
}

// ---------------------------------------------------------------------------
// Quasimode
// ---------------------------------------------------------------------------

Quasimode::Quasimode(const BaseFlow& flow, const CriticalCurve& curve, const SpectralSolution& spec,
                     QuasimodeConfig cfg)
    : flow_(&flow), curve_(&curve), spec_(&spec), cfg_(cfg) {
  if (!(cfg_.eps > 0.0 && cfg_.eps < 1.0)) throw ConfigError("quasimode: eps must lie in (0,1)");
  const double a0 = curve.a.front();
  if (cfg_.cutoff_inner <= 0.0) cfg_.cutoff_inner = a0 / 4.0;
  if (cfg_.cutoff_outer <= 0.0) cfg_.cutoff_outer = a0 / 2.0;
  if (!(cfg_.cutoff_inner < cfg_.cutoff_outer && cfg_.cutoff_outer < a0))
    throw ConfigError("quasimode: need 0 < cutoff_inner < cutoff_outer < a(0)");
  const double span_cap = std::pow(cfg_.eps, 0.25);
  if (cfg_.x_span <= 0.0 || cfg_.x_span > span_cap) cfg_.x_span = std::min(span_cap, curve.xgrid->extent());
  if (cfg_.nx < 8) cfg_.nx = 8;
  // phase resolution: slice spacing no coarser than eps
  const int nx_eps = static_cast<int>(std::ceil(cfg_.x_span / cfg_.eps)) + 1;
  cfg_.nx = std::max(cfg_.nx, std::min(nx_eps, 4096));
  phi_ = Cutoff(cfg_.cutoff_inner, cfg_.cutoff_outer);
  vtab_ = VTable(spec);

  // cutoff support must stay off the wall along the whole window
  for (int i = 0; i <= 32; ++i) {
    const double x = cfg_.x_span * i / 32.0;
    if (crit(x).a - cfg_.cutoff_outer <= 0.0) throw ConfigError("quasimode: cutoff support reaches the wall");
  }

  xgrid_ = make_grid(Grid::uniform_x(cfg_.x_span, cfg_.nx));
  omega_nodes_.resize(static_cast<size_t>(cfg_.nx));
  phase_nodes_.resize(static_cast<size_t>(cfg_.nx));
  for (int i = 0; i < cfg_.nx; ++i) omega_nodes_[static_cast<size_t>(i)] = phase_omega(xgrid_->node(i));
  Complex acc(0.0);
  phase_nodes_[0] = acc;
  for (int i = 1; i < cfg_.nx; ++i) {
    acc += 0.5 * xgrid_->spacing(i - 1) * (omega_nodes_[static_cast<size_t>(i) - 1] + omega_nodes_[static_cast<size_t>(i)]);
    phase_nodes_[static_cast<size_t>(i)] = acc;
  }
  fd_dx_ = std::min(1e-4, 0.25 * xgrid_->spacing(0));
}

Quasimode::Crit Quasimode::crit(double x) const {
  double a = curve_->a_at(x);
  for (int it = 0; it < 4; ++it) {
    const double g = flow_->du0_dy(x, a);
    const double dg = flow_->d2u0_dy2(x, a);
    a -= g / dg;
  }
  const double d2 = flow_->d2u0_dy2(x, a);
  if (!(d2 < 0.0)) throw NumericError("quasimode: lost the non-degenerate critical point at x=" + std::to_string(x));
  return {a, std::sqrt(-d2), flow_->u0(x, a)};
}

Complex Quasimode::phase_omega(double x) const {
  const Crit c = crit(x);
  const Complex den = -c.ua + std::sqrt(cfg_.eps / 2.0) * c.mu * spec_->tau;
  if (std::abs(den) < 1e-12 * (1.0 + c.ua)) throw NumericError("quasimode: singular phase configuration");
  return 1.0 / den;
}

Complex Quasimode::phase_factor(double x) const {
  // cumulative trapezoid on the slice grid plus a partial cell; exact for
  // x-independent omega
  const auto& xs = xgrid_->nodes();
  int j = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  j = std::clamp(j, 0, xgrid_->count() - 1);
  Complex phase = phase_nodes_[static_cast<size_t>(j)];
  if (x > xs[static_cast<size_t>(j)])
    phase += 0.5 * (x - xs[static_cast<size_t>(j)]) * (omega_nodes_[static_cast<size_t>(j)] + phase_omega(x));
  return std::exp(-kI / cfg_.eps * phase);
}

double Quasimode::predicted_amp(double x) const {
  const auto& xs = xgrid_->nodes();
  int j = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  j = std::clamp(j, 0, xgrid_->count() - 1);
  Complex phase = phase_nodes_[static_cast<size_t>(j)];
  if (x > xs[static_cast<size_t>(j)])
    phase += 0.5 * (x - xs[static_cast<size_t>(j)]) * (omega_nodes_[static_cast<size_t>(j)] + phase_omega(x));
  return std::exp(phase.imag() / cfg_.eps);
}

Complex Quasimode::v_reg_at(const Crit& c, double x, double y, int order, Side side) const {
  const bool above = y > c.a || (y == c.a && side == Side::right);
  if (!above) return Complex(0.0);
  switch (order) {
    case 0:
      return flow_->u0(x, y) - c.ua + std::sqrt(cfg_.eps / 2.0) * c.mu * spec_->tau;
    case 1:
      return flow_->du0_dy(x, y);
    case 2:
      return flow_->d2u0_dy2(x, y);
    case 3:
      return flow_->d3u0_dy3(x, y);
    default:
      throw std::invalid_argument("v_reg: order must be 0..3");
  }
}

Complex Quasimode::v_sl_at(const Crit& c, double, double y, int order, Side side) const {
  const double r = y - c.a;
  const double s0 = std::sqrt(cfg_.eps / 2.0) * c.mu;
  const double kappa = std::pow(c.mu * c.mu / (2.0 * cfg_.eps), 0.25);
  const double z = kappa * r;
  auto V = [&](int m) { return vtab_.eval(z, m, side); };
  switch (order) {
    case 0:
      return s0 * phi_(r, 0) * V(0);
    case 1:
      return s0 * (phi_(r, 1) * V(0) + phi_(r, 0) * kappa * V(1));
    case 2:
      return s0 * (phi_(r, 2) * V(0) + 2.0 * phi_(r, 1) * kappa * V(1) + phi_(r, 0) * kappa * kappa * V(2));
    case 3:
      return s0 * (phi_(r, 3) * V(0) + 3.0 * phi_(r, 2) * kappa * V(1) + 3.0 * phi_(r, 1) * kappa * kappa * V(2) +
                   phi_(r, 0) * kappa * kappa * kappa * V(3));
    default:
      throw std::invalid_argument("v_sl: order must be 0..3");
  }
}

Complex Quasimode::v_reg(double x, double y, int order, Side side) const {
  return v_reg_at(crit(x), x, y, order, side);
}

Complex Quasimode::v_sl(double x, double y, int order, Side side) const {
  return v_sl_at(crit(x), x, y, order, side);
}

Complex Quasimode::v_total(double x, double y, int order, Side side) const {
  const Crit c = crit(x);
  return v_reg_at(c, x, y, order, side) + v_sl_at(c, x, y, order, side);
}

Complex Quasimode::u_stripped(double x, double y, int dy_order, Side side) const {
  return -kI * v_total(x, y, 1 + dy_order, side) / phase_omega(x);
}

Complex Quasimode::u_hat(double x, double y, int dy_order, Side side) const {
  return phase_factor(x) * (-kI) * v_total(x, y, 1 + dy_order, side) / phase_omega(x);
}

Complex Quasimode::ddx_v_over_omega(double x, double y, int dy_order, Side side) const {
  const double h = fd_dx_;
  auto q = [&](double xx) { return v_total(xx, y, dy_order, side) / phase_omega(xx); };
  if (x - h < 0.0) {
    // one-sided 3-point at the inflow edge
    return (-3.0 * q(x) + 4.0 * q(x + h) - q(x + 2.0 * h)) / (2.0 * h);
  }
  return (q(x + h) - q(x - h)) / (2.0 * h);
}

Complex Quasimode::v_hat(double x, double y, Side side) const {
  const Complex slow = v_total(x, y, 0, side) / cfg_.eps + kI * ddx_v_over_omega(x, y, 0, side);
  return phase_factor(x) * slow;
}

GridPtr Quasimode::slice_grid(double x) const {
  const Crit c = crit(x);
  std::vector<double> nodes = flow_->ygrid->nodes();
  const int j = flow_->ygrid->nearest(c.a);
  if (j > 0 && j + 1 < static_cast<int>(nodes.size())) nodes[static_cast<size_t>(j)] = c.a;
  return make_grid(Grid::from_nodes(GridKind::y, std::move(nodes)));
}

Quasimode::ResidualParts Quasimode::residual_field(double x) const {
  const Crit c = crit(x);
  const Complex tau = spec_->tau;
  const double C = spec_->C;
  const double eps = cfg_.eps;
  const double s0 = std::sqrt(eps / 2.0) * c.mu;
  const double kappa = std::pow(c.mu * c.mu / (2.0 * eps), 0.25);
  const Complex omega = phase_omega(x);

  ResidualParts parts;
  parts.grid = slice_grid(x);
  const int n = parts.grid->count();
  parts.I1 = GridFn(parts.grid);
  parts.I2 = GridFn(parts.grid);
  parts.I31 = GridFn(parts.grid);
  parts.I32 = GridFn(parts.grid);
  parts.I33 = GridFn(parts.grid);
  parts.I34 = GridFn(parts.grid);
  parts.total_direct = GridFn(parts.grid);

  const double du_a = flow_->du0_dy(x, c.a);
  const double d2_a = flow_->d2u0_dy2(x, c.a);

  double max_total = 0.0, max_defect = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double y = parts.grid->node(iy);
    const Side side = Side::right;  // grid node at a(x) carries the right limit
    const double r = y - c.a;
    const double z = kappa * r;

    const double u0 = flow_->u0(x, y);
    const double v0 = flow_->v0(x, y);
    const double dux = flow_->du0_dx(x, y);
    const double duy = flow_->du0_dy(x, y);

    const Complex S0 = v_sl_at(c, x, y, 0, side);
    const Complex S1 = v_sl_at(c, x, y, 1, side);
    const Complex S2 = v_sl_at(c, x, y, 2, side);
    const Complex S3 = v_sl_at(c, x, y, 3, side);
    const Complex R3 = v_reg_at(c, x, y, 3, side);
    const Complex D0 = v_reg_at(c, x, y, 0, side) + S0;
    const Complex D1 = v_reg_at(c, x, y, 1, side) + S1;
    const Complex D2 = v_reg_at(c, x, y, 2, side) + S2;
    const Complex D3 = R3 + S3;

    const Complex ddx1 = flow_->x_independent ? Complex(0.0) : ddx_v_over_omega(x, y, 1, side);
    const Complex ddx0 = flow_->x_independent ? Complex(0.0) : ddx_v_over_omega(x, y, 0, side);

    // I1: transport/low-order terms; vanishes identically for x-independent flows
    parts.I1[iy] = -kI * u0 * ddx1 - kI * v0 * D2 / omega - kI * dux * D1 / omega + kI * duy * ddx0;

    // I2: the exact regular-part cancellation leaves i d3y v_reg / omega
    parts.I2[iy] = kI * R3 / omega;

    // I31/I32: Taylor remainders of u0, du0_dy around a(x)
    parts.I31[iy] = -(1.0 / eps) * (u0 - c.ua - du_a * r - 0.5 * d2_a * r * r) * S1;
    parts.I32[iy] = (1.0 / eps) * (duy - du_a - d2_a * r) * S0;

    // I33 in the phi-expanded form; the phi-bracket is the V-form of the
    // spectral identity and evaluates at interpolation-error level, leaving
    // the cutoff-derivative terms
    {
      auto V = [&](int m) { return vtab_.eval(z, m, side); };
      const Complex bracket = (z * z - tau) * V(1) - 2.0 * z * V(0) - kI * C * V(3);
      const Complex t_phi = s0 * kappa * kappa * kappa * phi_(r, 0) * bracket;
      const Complex t_p1 =
          phi_(r, 1) * (-(c.mu * c.mu / 2.0) * (tau - z * z) * V(0) - 3.0 * kI * C * s0 * kappa * kappa * V(2));
      const Complex t_p2 = phi_(r, 2) * (-3.0 * kI * C * s0 * kappa * V(1));
      const Complex t_p3 = phi_(r, 3) * (-kI * C * s0 * V(0));
      parts.I33[iy] = t_phi + t_p1 + t_p2 + t_p3;
    }

    // I34: the frozen-coefficient defect of the spectral constant
    parts.I34[iy] = kI * (C - c.ua + s0 * tau) * S3;

    // direct substitution of the assembled pair into the mode equation
    const Complex total = -(D1 / omega) / eps - (u0 / eps) * D1 - kI * u0 * ddx1 - kI * v0 * D2 / omega -
                          kI * dux * D1 / omega + (duy / eps) * D0 + kI * duy * ddx0 + kI * D3 / omega;
    parts.total_direct[iy] = total;

    const Complex sum =
        parts.I1[iy] + parts.I2[iy] + parts.I31[iy] + parts.I32[iy] + parts.I33[iy] + parts.I34[iy];
    max_total = std::max(max_total, std::abs(total));
    max_defect = std::max(max_defect, std::abs(total - sum));
  }
  parts.split_defect = max_defect / std::max(max_total, 1e-300);
  return parts;
}

// ---------------------------------------------------------------------------
// Report-level checks
// ---------------------------------------------------------------------------

namespace {

// W^{s,inf}_beta of the phase-stripped u amplitude at station x, both
// one-sided branches folded into the sup.
double stripped_norm(const Quasimode& qm, double x, int s) {
  const GridPtr grid = qm.slice_grid(x);
  std::vector<GridFn> branches;
  for (int order = 0; order <= s; ++order) {
    GridFn right(grid), left(grid);
    for (int iy = 0; iy < grid->count(); ++iy) {
      const double y = grid->node(iy);
      const Complex om = qm.phase_omega(x);
      right[iy] = -Complex(0.0, 1.0) * qm.v_total(x, y, 1 + order, Side::right) / om;
      left[iy] = -Complex(0.0, 1.0) * qm.v_total(x, y, 1 + order, Side::left) / om;
    }
    branches.push_back(std::move(right));
    branches.push_back(std::move(left));
  }
  return weighted_sup_norm(branches, qm.config().beta).value;
}

}  // namespace

SandwichResult growth_sandwich_check(const Quasimode& qm, int workers) {
  const int nx = qm.xgrid()->count();
  std::vector<double> r2(static_cast<size_t>(nx)), r0(static_cast<size_t>(nx));
  parallel_for(nx, workers, [&](int i) {
    const double x = qm.xgrid()->node(i);
    r2[static_cast<size_t>(i)] = stripped_norm(qm, x, 2);
    r0[static_cast<size_t>(i)] = stripped_norm(qm, x, 0);
  });
  SandwichResult out;
  out.lower_const = *std::min_element(r2.begin(), r2.end());
  out.upper_const = *std::max_element(r2.begin(), r2.end()) * std::pow(qm.config().eps, 0.25);
  out.s0_lower = *std::min_element(r0.begin(), r0.end());
  out.s0_upper = *std::max_element(r0.begin(), r0.end());
  return out;
}

ResidualReport residual_bound_check(const Quasimode& qm, int workers) {
  const int nx = qm.xgrid()->count();
  ResidualReport rep;
  rep.eps = qm.config().eps;
  rep.xs.resize(static_cast<size_t>(nx));
  rep.amp.resize(static_cast<size_t>(nx));
  rep.J_norm.resize(static_cast<size_t>(nx));
  rep.I1_norm.resize(static_cast<size_t>(nx));
  rep.I2_norm.resize(static_cast<size_t>(nx));
  rep.I3_norm.resize(static_cast<size_t>(nx));
  rep.I31_norm.resize(static_cast<size_t>(nx));
  rep.I32_norm.resize(static_cast<size_t>(nx));
  rep.I33_norm.resize(static_cast<size_t>(nx));
  rep.I34_norm.resize(static_cast<size_t>(nx));
  std::vector<double> defects(static_cast<size_t>(nx));

  const double beta = qm.config().beta;
  parallel_for(nx, workers, [&](int i) {
    const double x = qm.xgrid()->node(i);
    const Quasimode::ResidualParts parts = qm.residual_field(x);
    const WeightSpec w{beta, 0};
    rep.xs[static_cast<size_t>(i)] = x;
    rep.amp[static_cast<size_t>(i)] = qm.predicted_amp(x);
    rep.I1_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I1, w).value;
    rep.I2_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I2, w).value;
    rep.I31_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I31, w).value;
    rep.I32_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I32, w).value;
    rep.I33_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I33, w).value;
    rep.I34_norm[static_cast<size_t>(i)] = weighted_sup_norm(parts.I34, w).value;
    GridFn I3(parts.grid);
    for (int iy = 0; iy < parts.grid->count(); ++iy)
      I3[iy] = parts.I31[iy] + parts.I32[iy] + parts.I33[iy] + parts.I34[iy];
    rep.I3_norm[static_cast<size_t>(i)] = weighted_sup_norm(I3, w).value;
    rep.J_norm[static_cast<size_t>(i)] =
        weighted_sup_norm(parts.total_direct, w).value * rep.amp[static_cast<size_t>(i)];
    defects[static_cast<size_t>(i)] = parts.split_defect;
  });

  rep.split_defect = *std::max_element(defects.begin(), defects.end());
  double bound = 0.0;
  for (int i = 0; i < nx; ++i) bound = std::max(bound, rep.J_norm[static_cast<size_t>(i)] / rep.amp[static_cast<size_t>(i)]);
  rep.bound_constant = bound;

  // delta0 from the fitted growth of log amp against x/sqrt(eps)
  std::vector<double> xi(static_cast<size_t>(nx)), la(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    xi[static_cast<size_t>(i)] = rep.xs[static_cast<size_t>(i)] / std::sqrt(rep.eps);
    la[static_cast<size_t>(i)] = std::log(rep.amp[static_cast<size_t>(i)]);
  }
  const LineFit fit = fit_exponent(xi, la);
  rep.delta0_effective = fit.rate;
  rep.delta0_r2 = fit.r_squared;

  rep.sandwich = growth_sandwich_check(qm, workers);
  return rep;
}

double incompressibility_defect(const Quasimode& qm, double x, double hx) {
  const GridPtr grid = qm.slice_grid(x);
  const int n = grid->count();
  GridFn vh(grid);
  for (int iy = 0; iy < n; ++iy) vh[iy] = qm.v_hat(x, grid->node(iy), Side::right);
  const GridFn dv = derivative(vh, 1);

  double defect = 0.0, scale = 0.0;
  const int ja = grid->nearest(qm.crit(x).a);
  for (int iy = 0; iy < n; ++iy) {
    if (std::abs(iy - ja) <= 1) continue;  // one-sided kink cell
    const double y = grid->node(iy);
    const Complex dudx = (qm.u_hat(x + hx, y) - qm.u_hat(x - hx, y)) / (2.0 * hx);
    defect = std::max(defect, std::abs(dudx + dv[iy]));
    scale = std::max(scale, std::abs(dudx));
  }
  return defect / std::max(scale, 1e-300);
}

}  // namespace prandtl
