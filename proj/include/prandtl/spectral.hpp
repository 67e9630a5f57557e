#pragma once

#include <span>
#include <utility>
#include <vector>

#include "prandtl/errors.hpp"
#include "prandtl/grid.hpp"
#include "prandtl/spline.hpp"

namespace prandtl {

struct DecayFit {
  double c = 0.0;         ///< binding Gaussian rate: |W| (left) and |W-1| (right) ~ e^{-c z^2}
  double C_prime = 0.0;   ///< fitted prefactor
  double r_squared = 0.0; ///< worst of the two value-fit r^2
  double deriv_r2 = 0.0;  ///< worst r^2 across the W', W'' decay fits
  /// Gaussian tails credible: rate bounded away from 0 and the fit linear.
  /// An injected algebraic tail fails this through the collapsed rate
  /// (c ~ 0.05) even though its r^2 only drops to ~0.93 on this window.
  bool gaussian_ok = false;
};

/// The pair (tau, W): Im tau < 0 and W solves
///   (tau - z^2)^2 W' + i C d^3/dz^3 [(tau - z^2) W] = 0,
/// W(-inf) = 0, W(+inf) = 1, on the truncated line [-z_max, z_max].
struct SpectralSolution {
  double C = 0.0;  ///< u0(0, a) > 0
  Complex tau{0.0, 0.0};
  GridPtr zgrid;
  GridFn W;
  GridFn W1, W2;  ///< finite-difference W', W'' on zgrid
  GridFn V;       ///< V = (tau - z^2)(W - H), H(0) = 1
  double ode_residual = 0.0;   ///< max interior residual on the 2x verification grid
  double bc_mismatch = 0.0;    ///< |W'(+z_max)| of the accepted root
  DecayFit decay_fit;
  std::vector<Complex> candidates;  ///< all distinct roots found across seeds
};

struct SpectralOptions {
  double z_max = 8.0;
  int n = 4001;         ///< collocation nodes (odd)
  int n_scan = 1001;    ///< coarse grid for the seed scan
  double tol = 1e-10;   ///< Newton target on |mismatch|
  double accept_mismatch = 1e-8;
  double residual_rel = 1e-6;  ///< eigen-residual acceptance, relative to scale
  double box_re_min = -4.0, box_re_max = 4.0;
  double box_im_min = -4.0, box_im_max = -0.05;
  int scan_nx = 12, scan_ny = 12;
  int newton_from_best = 5;
  int max_iter = 40;
  int workers = 1;
};

/// find_tau failure; carries the |mismatch| landscape over the seed box.
class SpectralSearchError : public NumericError {
 public:
  SpectralSearchError(const std::string& what, std::vector<std::pair<Complex, double>> landscape_)
      : NumericError(what), landscape(std::move(landscape_)) {}
  std::vector<std::pair<Complex, double>> landscape;
};

/// Banded collocation solve of the W equation at a trial tau: imposes
/// W(-z_max) = 0, W'(-z_max) = 0, W(z_max) = 1 and returns the unimposed
/// fourth condition W'(z_max) as the eigenvalue mismatch.
struct CollocationResult {
  GridFn W;
  GridFn u;  ///< W' samples from the underlying second-order solve
  Complex mismatch;
};
CollocationResult solve_w_collocation(Complex tau, double C, const GridPtr& zgrid, bool conjugate = false);

/// Pointwise ODE residual with the library difference stencils; independent
/// of the collocation rows (unexpanded product form). Boundary-adjacent
/// nodes are zeroed.
GridFn w_residual(const GridFn& W, Complex tau, double C);

SpectralSolution find_tau(double C, const SpectralOptions& opt = {});
SpectralSolution find_tau(double C, std::span<const Complex> seeds, const SpectralOptions& opt = {});

DecayFit verify_gaussian_decay(const SpectralSolution& sol);

/// V = (tau - z^2)(W - H) with the right-continuous Heaviside (H(0) = 1).
GridFn build_V(const SpectralSolution& sol);

/// Auxiliary real eigenvalue problem used as a seeding/diagnostic aid:
///   u''/(z^2+1) + 6z u'/(z^2+1)^2 + 6 u/(z^2+1)^2 = (alpha/C) u
/// with decay (Dirichlet) boundary conditions.
struct AuxiliaryEigen {
  GridPtr grid;
  std::vector<Complex> alphas;                 ///< sorted by |alpha|
  std::vector<std::vector<Complex>> vectors;   ///< matching eigenvectors on the full grid
};
AuxiliaryEigen auxiliary_eigenproblem(double C, const GridPtr& zgrid, int n_keep = 6);

/// One-sided evaluation of V and derivatives (orders 0..3) at arbitrary z;
/// cubic interpolation from the spectral grid, exact jump at z = 0.
enum class Side { left, right };
class VTable {
 public:
  VTable() = default;
  explicit VTable(const SpectralSolution& sol);
  Complex eval(double z, int order, Side side) const;
  double z_max() const { return zmax_; }

 private:
  double zmax_ = 0.0;
  ComplexSpline left_[4], right_[4];
};

}  // namespace prandtl
