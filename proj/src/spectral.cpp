#include "prandtl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "prandtl/banded.hpp"
#include "prandtl/calculus.hpp"
#include "prandtl/fitting.hpp"
#include "prandtl/newton.hpp"
#include "prandtl/parallel.hpp"

namespace prandtl {

namespace {

Complex quad(Complex tau, double z) { return tau - z * z; }

}  // namespace

namespace {

// The W equation carries no zeroth-order W term, so it is exactly second
// order in u = W':  iC(tau-z^2) u'' - 6iCz u' + [(tau-z^2)^2 - 6iC] u = 0.
// Solving for u on each half interval with the decay condition at the far
// end and u(0) = 1 integrates the wanted (both-ways-decaying) mode in its
// relatively growing direction, which keeps the double-Gaussian companion
// mode from swamping the solve on wide truncation intervals.
std::vector<Complex> solve_u_half(Complex tau, double C, Complex unit_i, std::span<const double> z,
                                  bool decay_at_first) {
  const int m = static_cast<int>(z.size());
  BandedMatrix A(m, 1, 1);
  std::vector<Complex> rhs(static_cast<size_t>(m), Complex(0.0));
  const int bc_far = decay_at_first ? 0 : m - 1;
  const int bc_one = decay_at_first ? m - 1 : 0;
  A.at(bc_far, bc_far) = 1.0;
  A.at(bc_one, bc_one) = 1.0;
  rhs[static_cast<size_t>(bc_one)] = 1.0;
  for (int i = 1; i + 1 < m; ++i) {
    const double zi = z[static_cast<size_t>(i)];
    const double hm = zi - z[static_cast<size_t>(i) - 1];
    const double hp = z[static_cast<size_t>(i) + 1] - zi;
    const Complex q = quad(tau, zi);
    const Complex c2 = unit_i * C * q;
    const Complex c1 = -6.0 * unit_i * C * zi;
    const Complex c0 = q * q - 6.0 * unit_i * C;
    A.at(i, i - 1) = c2 * 2.0 / (hm * (hm + hp)) + c1 * (-hp / (hm * (hm + hp)));
    A.at(i, i) = c2 * (-2.0 / (hm * hp)) + c1 * ((hp - hm) / (hm * hp)) + c0;
    A.at(i, i + 1) = c2 * 2.0 / (hp * (hm + hp)) + c1 * (hm / (hp * (hm + hp)));
  }
  return A.factor().solve(rhs);
}

Complex one_sided_deriv(std::span<const double> z, std::span<const Complex> u, bool at_last) {
  double w[3];
  if (at_last) {
    const size_t n = z.size();
    fd_weights(z[n - 1], z.subspan(n - 3, 3), 1, w);
    return w[0] * u[n - 3] + w[1] * u[n - 2] + w[2] * u[n - 1];
  }
  fd_weights(z[0], z.subspan(0, 3), 1, w);
  return w[0] * u[0] + w[1] * u[1] + w[2] * u[2];
}

}  // namespace

CollocationResult solve_w_collocation(Complex tau, double C, const GridPtr& zgrid, bool conjugate) {
  const int n = zgrid->count();
  if (n < 64) throw std::invalid_argument("solve_w_collocation: need at least 64 nodes");
  // tau - z^2 must not vanish on the real line; the search half-plane flips
  // with the conjugated problem.
  if (conjugate ? !(tau.imag() > 0.0) : !(tau.imag() < 0.0))
    throw std::invalid_argument("solve_w_collocation: tau on the wrong side of the real axis");
  const Complex unit_i = conjugate ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
  const auto& z = zgrid->nodes();
  const int i0 = zgrid->nearest(0.0);

  const std::span<const double> zL(z.data(), static_cast<size_t>(i0) + 1);
  const std::span<const double> zR(z.data() + i0, static_cast<size_t>(n - i0));
  const std::vector<Complex> uL = solve_u_half(tau, C, unit_i, zL, /*decay_at_first=*/true);
  const std::vector<Complex> uR = solve_u_half(tau, C, unit_i, zR, /*decay_at_first=*/false);

  // Unimposed matching condition: continuity of u' across 0. Both halves are
  // normalized to u(0) = 1, so this is the Wronskian defect of the shoot.
  CollocationResult out;
  out.mismatch = one_sided_deriv(zL, uL, /*at_last=*/true) - one_sided_deriv(zR, uR, /*at_last=*/false);

  // Assemble W = int u with W(-z_max) = 0, normalized so W(z_max) = 1; the
  // three imposed conditions then hold exactly and W'(+-z_max) = 0 by the
  // half-solve boundary rows.
  out.u = GridFn(zgrid);
  for (int i = 0; i <= i0; ++i) out.u[i] = uL[static_cast<size_t>(i)];
  for (int i = i0; i < n; ++i) out.u[i] = uR[static_cast<size_t>(i - i0)];
  GridFn W = cumulative_integral(out.u);
  const Complex total = W[n - 1];
  if (std::abs(total) < 1e-8) throw NumericError("solve_w_collocation: degenerate normalization (int u ~ 0)");
  for (int i = 0; i < n; ++i) W[i] /= total;
  for (int i = 0; i < n; ++i) out.u[i] /= total;
  out.W = std::move(W);
  return out;
}

GridFn w_residual(const GridFn& W, Complex tau, double C) {
  const int n = W.size();
  if (n < 64) throw std::invalid_argument("w_residual: need at least 64 nodes");
  GridFn P(W.grid_ptr());
  for (int i = 0; i < n; ++i) P[i] = quad(tau, W.grid().node(i)) * W[i];
  const GridFn W1 = derivative(W, 1);
  const GridFn P3 = derivative(P, 3);
  GridFn res(W.grid_ptr());
  for (int i = 2; i <= n - 3; ++i) {
    const Complex q = quad(tau, W.grid().node(i));
    res[i] = q * q * W1[i] + Complex(0.0, 1.0) * C * P3[i];
  }
  return res;
}

namespace {

GridPtr refined_grid(const Grid& g, int factor) {
  // keep symmetry: refine each half uniformly in index space
  const int n = (g.count() - 1) * factor + 1;
  std::vector<double> nodes(static_cast<size_t>(n));
  for (int i = 0; i + 1 < g.count(); ++i) {
    for (int k = 0; k < factor; ++k) {
      const double t = static_cast<double>(k) / factor;
      nodes[static_cast<size_t>(i * factor + k)] = g.node(i) + t * (g.node(i + 1) - g.node(i));
    }
  }
  nodes.back() = g.node(g.count() - 1);
  return make_grid(Grid::from_nodes(g.kind(), std::move(nodes)));
}

double residual_scale(const SpectralSolution& sol, const GridFn& W_fine) {
  const double zmax = sol.zgrid->extent();
  const double base = std::max(std::abs(sol.tau), zmax * zmax);
  return base * base * derivative(W_fine, 1).max_abs();
}

struct TailFit {
  double c = 0.0, prefactor = 0.0, r2 = 0.0;
};

// log|f| against z^2 on |z| in [0.25, 0.85] z_max, skipping samples at the
// rounding floor of the solve.
TailFit fit_tail(const GridFn& f, bool left_side) {
  const auto& z = f.grid().nodes();
  const double zmax = f.grid().extent();
  double fmax = 0.0;
  for (int i = 0; i < f.size(); ++i) fmax = std::max(fmax, std::abs(f[i]));
  double floor_abs = std::max(1e-13 * fmax, 1e-300);
  std::vector<double> xs, ys;
  for (int pass = 0; pass < 2 && xs.size() < 8; ++pass) {
    xs.clear();
    ys.clear();
    for (int i = 0; i < f.size(); ++i) {
      const double zi = z[static_cast<size_t>(i)];
      if (left_side && (zi > -0.25 * zmax || zi < -0.85 * zmax)) continue;
      if (!left_side && (zi < 0.25 * zmax || zi > 0.85 * zmax)) continue;
      const double a = std::abs(f[i]);
      if (a < floor_abs) continue;
      xs.push_back(zi * zi);
      ys.push_back(std::log(a));
    }
    // z^2 grows away from 0 on each side; left side arrives descending.
    if (left_side) {
      std::reverse(xs.begin(), xs.end());
      std::reverse(ys.begin(), ys.end());
    }
    floor_abs *= 1e-2;  // relax once if the window is starved
  }
  TailFit out;
  if (xs.size() < 3) return out;
  const LineFit fit = fit_exponent(xs, ys);
  out.c = -fit.rate;
  out.prefactor = std::exp(fit.intercept);
  out.r2 = fit.r_squared;
  return out;
}

}  // namespace

DecayFit verify_gaussian_decay(const SpectralSolution& sol) {
  GridFn Wm1 = sol.W;
  for (int i = 0; i < Wm1.size(); ++i) Wm1[i] -= 1.0;

  const TailFit left = fit_tail(sol.W, true);
  const TailFit right = fit_tail(Wm1, false);

  DecayFit fit;
  fit.c = std::min(left.c, right.c);
  fit.C_prime = std::max(left.prefactor, right.prefactor);
  fit.r_squared = std::min(left.r2, right.r2);

  // Derivative decay, k = 1, 2, both sides; worst r^2 kept.
  fit.deriv_r2 = 1.0;
  for (int k = 1; k <= 2; ++k) {
    const GridFn d = derivative(sol.W, k);
    for (const bool side : {true, false}) {
      const TailFit tf = fit_tail(d, side);
      if (tf.r2 > 0.0) fit.deriv_r2 = std::min(fit.deriv_r2, tf.r2);
    }
  }
  fit.gaussian_ok = fit.c > 0.1 && fit.r_squared >= 0.97;
  return fit;
}

GridFn build_V(const SpectralSolution& sol) {
  GridFn V(sol.zgrid);
  for (int i = 0; i < V.size(); ++i) {
    const double z = sol.zgrid->node(i);
    const double H = z >= 0.0 ? 1.0 : 0.0;
    V[i] = quad(sol.tau, z) * (sol.W[i] - H);
  }
  return V;
}

SpectralSolution find_tau(double C, const SpectralOptions& opt) {
  if (!(C > 0.0)) throw std::invalid_argument("find_tau: C must be positive");
  // Coarse |mismatch| landscape over the lower-half-plane box.
  GridPtr scan_grid = make_grid(Grid::symmetric_z(opt.z_max, opt.n_scan | 1));
  std::vector<std::pair<Complex, double>> landscape(static_cast<size_t>(opt.scan_nx) * opt.scan_ny);
  parallel_for(opt.scan_nx * opt.scan_ny, opt.workers, [&](int idx) {
    const int i = idx % opt.scan_nx;
    const int j = idx / opt.scan_nx;
    const double re = opt.box_re_min + (opt.box_re_max - opt.box_re_min) * (i + 0.5) / opt.scan_nx;
    const double im = opt.box_im_min + (opt.box_im_max - opt.box_im_min) * (j + 0.5) / opt.scan_ny;
    const Complex tau(re, im);
    double m = std::numeric_limits<double>::infinity();
    try {
      m = std::abs(solve_w_collocation(tau, C, scan_grid).mismatch);
    } catch (const NumericError&) {
      // spurious resonance: leave the cell at infinity
    }
    landscape[static_cast<size_t>(idx)] = {tau, m};
  });

  std::vector<std::pair<Complex, double>> best(landscape);
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  best.resize(static_cast<size_t>(std::min<int>(opt.newton_from_best, static_cast<int>(best.size()))));
  std::vector<Complex> seeds;
  for (const auto& [tau, m] : best)
    if (std::isfinite(m)) seeds.push_back(tau);
  if (seeds.empty()) throw SpectralSearchError("find_tau: scan produced no usable seeds", landscape);
  try {
    return find_tau(C, seeds, opt);
  } catch (const SpectralSearchError& e) {
    throw SpectralSearchError(e.what(), landscape);
  }
}

SpectralSolution find_tau(double C, std::span<const Complex> seeds, const SpectralOptions& opt) {
  if (!(C > 0.0)) throw std::invalid_argument("find_tau: C must be positive");
  if (seeds.empty()) throw std::invalid_argument("find_tau: no seeds");
  for (const Complex& s : seeds)
    if (!(s.imag() < 0.0)) throw std::invalid_argument("find_tau: seeds must lie in the open lower half-plane");

  GridPtr zgrid = make_grid(Grid::symmetric_z(opt.z_max, opt.n | 1));
  auto mismatch = [&](Complex tau) -> Complex {
    if (!(tau.imag() < 0.0)) return Complex(1e6, 0.0);  // steer Newton away from the real axis
    return solve_w_collocation(tau, C, zgrid).mismatch;
  };

  NewtonOptions nopt;
  nopt.tol = opt.tol;
  nopt.max_iter = opt.max_iter;

  std::vector<Complex> roots;
  std::vector<std::pair<Complex, double>> attempts;
  for (const Complex& seed : seeds) {
    const NewtonResult r = complex_newton(mismatch, seed, nopt);
    attempts.push_back({r.root, r.residual_abs});
    if (!r.converged || r.residual_abs > opt.accept_mismatch) continue;
    if (!(r.root.imag() < 0.0)) continue;
    const bool dup = std::any_of(roots.begin(), roots.end(),
                                 [&](Complex t) { return std::abs(t - r.root) <= 1e-6 * (1.0 + std::abs(t)); });
    if (!dup) roots.push_back(r.root);
  }
  if (roots.empty()) throw SpectralSearchError("find_tau: no seed converged to an acceptable root", attempts);

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return -a.imag() > -b.imag(); });

  // Validate candidates in order: residual on the doubled grid, then decay.
  for (const Complex& tau : roots) {
    SpectralSolution sol;
    sol.C = C;
    sol.tau = tau;
    sol.zgrid = zgrid;
    CollocationResult col = solve_w_collocation(tau, C, zgrid);
    sol.W = std::move(col.W);
    sol.bc_mismatch = std::abs(col.mismatch);
    sol.W1 = std::move(col.u);  // exact first-derivative samples of the solve
    sol.W2 = derivative(sol.W1, 1);
    sol.candidates = roots;

    // Verification pass: re-polish tau on a doubled grid (removing the
    // coarse-discretization shift), then measure the interior residual there
    // with the independent product-form stencils.
    const GridPtr fine = refined_grid(*zgrid, 2);
    NewtonOptions vopt = nopt;
    vopt.max_iter = 8;
    const NewtonResult fine_root = complex_newton(
        [&](Complex t) -> Complex {
          if (!(t.imag() < 0.0)) return Complex(1e6, 0.0);
          return solve_w_collocation(t, C, fine).mismatch;
        },
        tau, vopt);
    if (!fine_root.converged) continue;
    const CollocationResult col_fine = solve_w_collocation(fine_root.root, C, fine);
    const double res_max = w_residual(col_fine.W, fine_root.root, C).max_abs();
    sol.ode_residual = res_max;
    const double scale = residual_scale(sol, col_fine.W);
    if (res_max > opt.residual_rel * scale) continue;

    sol.decay_fit = verify_gaussian_decay(sol);
    if (!sol.decay_fit.gaussian_ok) continue;

    sol.V = build_V(sol);
    return sol;
  }
  throw SpectralSearchError("find_tau: roots found but none passed residual/decay validation", attempts);
}

VTable::VTable(const SpectralSolution& sol) {
  zmax_ = sol.zgrid->extent();
  const auto& z = sol.zgrid->nodes();
  const int n = sol.zgrid->count();
  const int i0 = sol.zgrid->nearest(0.0);
  const Complex tau = sol.tau;
  const double C = sol.C;

  auto values = [&](int order, double H, int i) -> Complex {
    const double zi = z[static_cast<size_t>(i)];
    const Complex q = quad(tau, zi);
    const Complex WH = sol.W[i] - H;
    switch (order) {
      case 0:
        return q * WH;
      case 1:
        return -2.0 * zi * WH + q * sol.W1[i];
      case 2:
        return -2.0 * WH - 4.0 * zi * sol.W1[i] + q * sol.W2[i];
      case 3:
        // ODE identity: [(tau - z^2) W]''' = i (tau - z^2)^2 W' / C, and the
        // Heaviside part differentiates to zero away from the jump.
        return Complex(0.0, 1.0) * q * q * sol.W1[i] / C;
      default:
        return Complex(0.0);
    }
  };

  std::vector<double> zl(z.begin(), z.begin() + i0 + 1);
  std::vector<double> zr(z.begin() + i0, z.end());
  for (int order = 0; order < 4; ++order) {
    std::vector<Complex> vl(static_cast<size_t>(i0) + 1), vr(static_cast<size_t>(n - i0));
    for (int i = 0; i <= i0; ++i) vl[static_cast<size_t>(i)] = values(order, 0.0, i);
    for (int i = i0; i < n; ++i) vr[static_cast<size_t>(i - i0)] = values(order, 1.0, i);
    left_[order] = ComplexSpline(zl, vl);
    right_[order] = ComplexSpline(zr, vr);
  }
}

Complex VTable::eval(double z, int order, Side side) const {
  if (order < 0 || order > 3) throw std::invalid_argument("VTable::eval: order must be 0..3");
  if (std::abs(z) > zmax_) return Complex(0.0);
  if (z > 0.0 || (z == 0.0 && side == Side::right)) return right_[order].eval(z);
  return left_[order].eval(z);
}

}  // namespace prandtl
