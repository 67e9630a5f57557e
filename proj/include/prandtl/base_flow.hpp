#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prandtl/grid.hpp"
#include "prandtl/spline.hpp"

namespace prandtl {

/// Real scalar field sampled on xgrid x ygrid (row-major in x).
struct Field2D {
  int nx = 0, ny = 0;
  std::vector<double> v;

  Field2D() = default;
  Field2D(int nx_, int ny_) : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, 0.0) {}
  double& at(int ix, int iy) { return v[static_cast<size_t>(ix) * ny + iy]; }
  double at(int ix, int iy) const { return v[static_cast<size_t>(ix) * ny + iy]; }
};

using ScalarFn2 = std::function<double(double, double)>;
using ScalarFn1 = std::function<double(double)>;

/// Stationary base flow (u0, v0) with the derivative fields every other
/// module consumes. Point evaluators are exact for the analytic catalog and
/// interpolated for flows produced by the von Mises pipeline; the sampled
/// tables on (xgrid, ygrid) serve export and validation.
class BaseFlow {
 public:
  std::string name;
  GridPtr xgrid;
  GridPtr ygrid;

  ScalarFn2 u0, du0_dy, d2u0_dy2, d3u0_dy3;
  ScalarFn2 du0_dx, dxy_u0;
  ScalarFn2 v0;
  ScalarFn1 p_x;
  ScalarFn1 U_far;
  /// Weight rate: u0 - U_far decays like e^{-alpha_decay y}.
  double alpha_decay = 1.0;
  bool x_independent = false;
  /// Seed critical point of u0|x=0 when the profile has one.
  std::optional<double> critical_seed;

  Field2D sample(const ScalarFn2& f) const;
  /// min over interior grid nodes (y > 0) of u0.
  double min_u0_interior() const;
};

/// Critical-point curve a(x) with the derived quantities of the quasimode.
struct CriticalCurve {
  GridPtr xgrid;
  std::vector<double> a;    ///< dy u0(x, a(x)) = 0
  std::vector<double> mu;   ///< |d2y u0(x, a(x))|^(1/2)
  std::vector<double> ua;   ///< u0(x, a(x))
  double C_lemma = 0.0;     ///< u0(0, a(0))

  double a_at(double x) const;
  double mu_at(double x) const;
  double ua_at(double x) const;
};

/// Inflow data and pressure gradient for the steady marcher.
struct SteadyBC {
  std::vector<double> Y;
  std::vector<double> u1;
  ScalarFn1 p_x;
  double X = 1.0;          ///< march horizon (in xi, from xi0)
  double xi0 = 0.0;        ///< station of the inflow profile
  ScalarFn1 U;             ///< far-field tangential velocity, U(x)^2 = far field of omega
};

struct ConditionCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
};

struct OleinikReport {
  std::vector<ConditionCheck> checks;
  bool all_pass = false;
  /// Fitted decay |u1'(Y)| <= m1 e^{-m2 Y} (reported, not required).
  double m1 = 0.0, m2 = 0.0, decay_r2 = 0.0;
};

/// Von Mises unknown omega(xi, psi) = u^2 on the transformed domain.
struct MisesField {
  GridPtr xi_grid;
  GridPtr psi_grid;
  Field2D omega;            ///< omega(xi, psi) >= 0, omega(xi, 0) = 0
  ScalarFn1 U;
  bool separated = false;
  double separation_xi = 0.0;
};

struct FlowDiagnostics {
  double max_steady_residual = 0.0;
  double max_noslip = 0.0;
  double max_incompressibility = 0.0;
  double max_farfield = 0.0;
  bool v0_linear_growth = false;  ///< v0 = O(y) seen (p_x != 0 signature)
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct CatalogParams {
  double U = 1.0;       ///< far-field speed
  double decay = 1.0;   ///< e^{-decay*y} envelope
  double A = 1.5;       ///< shear-dip amplitude (critical profiles)
  double A_amp = 0.1;   ///< relative x-modulation of A (critical_xdep)
  double y_max = 50.0;
  int ny = 601;
  double stretch = 4.0;
  double x_end = 1.0;
  int nx = 33;
};

/// name in {monotone_exp, critical_shear, critical_xdep}.
BaseFlow analytic_profile(const std::string& name, const CatalogParams& params = {});

/// March a'(x) = -dxy u0 / d2y u0 from a0 with a Newton polish of
/// dy u0(x, a(x)) = 0 at every x node.
CriticalCurve critical_point_curve(const BaseFlow& flow, double a0);

OleinikReport check_oleinik_conditions(const SteadyBC& bc);

/// Semi-implicit xi-march of sqrt(omega) d2_psi omega - d_xi omega - 2 p_xi = 0.
MisesField von_mises_march(const SteadyBC& bc, double psi_max, int n_psi, int n_xi_out = 33, bool force = false);

/// Back to physical variables: Y(xi, psi) = int dpsi'/sqrt(omega), u0 = sqrt(omega).
BaseFlow invert_von_mises(const MisesField& mf, int ny_out = 401);

/// v0(x, y) = -int_0^y du0/dx dy' (incompressibility).
std::vector<double> recover_v0(std::span<const double> ynodes, std::span<const double> du0_dx_col);

FlowDiagnostics validate_baseflow(const BaseFlow& flow);

/// CSV inflow profile (columns Y, u1).
SteadyBC load_inflow_csv(const std::string& path, double px_value, double U_value, double X);

void export_baseflow_csv(const BaseFlow& flow, const std::string& path);

}  // namespace prandtl
