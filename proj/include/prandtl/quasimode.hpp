#pragma once

#include <vector>

#include "prandtl/base_flow.hpp"
#include "prandtl/grid.hpp"
#include "prandtl/norms.hpp"
#include "prandtl/spectral.hpp"

namespace prandtl {

struct QuasimodeConfig {
  double eps = 1e-2;        ///< 1/k, in (0,1)
  double beta = 0.5;        ///< weight of the W^{s,inf}_beta norms (< alpha_decay)
  double cutoff_inner = 0;  ///< phi == 1 radius; defaults to a(0)/4 when <= 0
  double cutoff_outer = 0;  ///< phi == 0 beyond; defaults to a(0)/2
  double x_span = 0;        ///< report window; defaults to eps^{1/4} (its cap)
  int nx = 64;              ///< slices on [0, x_span]; spacing also capped at eps
};

/// Even C^4 cutoff: 1 on [0, inner], 0 beyond outer, polynomial join.
class Cutoff {
 public:
  Cutoff() = default;
  Cutoff(double inner, double outer);
  double operator()(double r, int order) const;  ///< d^order/dr^order, order 0..3
  double inner() const { return inner_; }
  double outer() const { return outer_; }

 private:
  double inner_ = 0.0, outer_ = 0.0;
};

/// The assembled approximate solution: regular + shear-layer velocities, the
/// phase, and the residual decomposition, all evaluated pointwise with
/// analytic y-derivatives and one-sided limits at y = a(x).
class Quasimode {
 public:
  Quasimode(const BaseFlow& flow, const CriticalCurve& curve, const SpectralSolution& spec, QuasimodeConfig cfg);

  const QuasimodeConfig& config() const { return cfg_; }
  const BaseFlow& flow() const { return *flow_; }
  const SpectralSolution& spectral() const { return *spec_; }
  const GridPtr& xgrid() const { return xgrid_; }

  struct Crit {
    double a, mu, ua;
  };
  /// Critical point at station x, Newton-polished on the flow.
  Crit crit(double x) const;

  /// omega(eps, x) = 1 / (-u0(x,a) + sqrt(eps/2) mu tau).
  Complex phase_omega(double x) const;
  /// e^{-(i/eps) int_0^x omega}; modulus = predicted_amp.
  Complex phase_factor(double x) const;
  double predicted_amp(double x) const;

  /// Ingredients and their y-derivatives (order 0..3); side resolves y = a(x).
  Complex v_reg(double x, double y, int order, Side side = Side::right) const;
  Complex v_sl(double x, double y, int order, Side side = Side::right) const;
  Complex v_total(double x, double y, int order, Side side = Side::right) const;

  /// u-amplitude (phase included, e^{-it/eps} stripped) and its y-derivatives.
  Complex u_hat(double x, double y, int dy_order = 0, Side side = Side::right) const;
  /// v-amplitude per the 1/eps and d/dx structure of the construction.
  Complex v_hat(double x, double y, Side side = Side::right) const;

  /// Phase-stripped u-amplitude derivatives (modulus ratio to predicted_amp).
  Complex u_stripped(double x, double y, int dy_order, Side side) const;

  /// y-grid for station x: base grid with one node moved onto a(x).
  GridPtr slice_grid(double x) const;

  /// Residual decomposition at station x, phase-stripped (the bracket B with
  /// I_eps = phase * B). Values on slice_grid(x), right limits at a(x).
  struct ResidualParts {
    GridPtr grid;
    GridFn I1, I2, I31, I32, I33, I34;
    GridFn total_direct;  ///< independent route: the full 8-term bracket
    double split_defect;  ///< max |total_direct - sum(parts)| / max|total|
  };
  ResidualParts residual_field(double x) const;

  /// d/dx at fixed y of (v_total / omega)-type quantities, centered FD.
  Complex ddx_v_over_omega(double x, double y, int dy_order, Side side) const;

 private:
  Complex v_reg_at(const Crit& c, double x, double y, int order, Side side) const;
  Complex v_sl_at(const Crit& c, double x, double y, int order, Side side) const;

  const BaseFlow* flow_;
  const CriticalCurve* curve_;
  const SpectralSolution* spec_;
  QuasimodeConfig cfg_;
  Cutoff phi_;
  VTable vtab_;
  GridPtr xgrid_;
  std::vector<Complex> omega_nodes_;
  std::vector<Complex> phase_nodes_;  ///< cumulative int of omega at xgrid nodes
  double fd_dx_ = 1e-5;
};

struct SandwichResult {
  double lower_const = 0.0;  ///< min_x ||u(x)||_{W^{2,inf}_beta} / amp(x)
  double upper_const = 0.0;  ///< max_x of the same, times eps^{1/4}
  double s0_lower = 0.0, s0_upper = 0.0;  ///< same ratios for the s=0 norm
};

struct ResidualReport {
  double eps = 0.0;
  std::vector<double> xs;
  std::vector<double> amp;
  std::vector<double> J_norm;
  std::vector<double> I1_norm, I2_norm, I3_norm;
  std::vector<double> I31_norm, I32_norm, I33_norm, I34_norm;
  double bound_constant = 0.0;     ///< sup_x J_norm/amp
  double delta0_effective = 0.0;   ///< fitted rate of log amp against x/sqrt(eps)
  double delta0_r2 = 0.0;
  double split_defect = 0.0;       ///< worst direct-vs-decomposition defect
  SandwichResult sandwich;
};

/// Residual norms, the (2.7)-type bound constant, and the growth sandwich
/// over the configured x window.
ResidualReport residual_bound_check(const Quasimode& qm, int workers = 1);

SandwichResult growth_sandwich_check(const Quasimode& qm, int workers = 1);

/// Discrete incompressibility defect of the assembled pair at station x:
/// max_y |Dx u + Dy v| / scale with centered differences of step hx.
double incompressibility_defect(const Quasimode& qm, double x, double hx);

}  // namespace prandtl
