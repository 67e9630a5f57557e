#include "prandtl/banded.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

#include "prandtl/errors.hpp"

namespace prandtl {

namespace {
lapack_complex_double* lp(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }
const lapack_complex_double* lp(const Complex* p) { return reinterpret_cast<const lapack_complex_double*>(p); }
}  // namespace

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<size_t>(ldab_) * n, Complex(0.0)) {
  if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad shape");
  if (kl > 5 || ku > 5) throw std::invalid_argument("BandedMatrix: bandwidth must be <= 5");
}

Complex& BandedMatrix::at(int row, int col) {
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || !in_band(row, col))
    throw std::invalid_argument("BandedMatrix::at outside band");
  // Column-major band storage: A(i,j) -> ab[kl+ku+i-j, j].
  return ab_[static_cast<size_t>(col) * ldab_ + static_cast<size_t>(kl_ + ku_ + row - col)];
}

Complex BandedMatrix::get(int row, int col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || !in_band(row, col)) return Complex(0.0);
  return ab_[static_cast<size_t>(col) * ldab_ + static_cast<size_t>(kl_ + ku_ + row - col)];
}

std::vector<Complex> BandedMatrix::multiply(std::span<const Complex> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("BandedMatrix::multiply size mismatch");
  std::vector<Complex> out(static_cast<size_t>(n_), Complex(0.0));
  for (int i = 0; i < n_; ++i) {
    Complex acc(0.0);
    const int lo = std::max(0, i - kl_);
    const int hi = std::min(n_ - 1, i + ku_);
    for (int j = lo; j <= hi; ++j) acc += get(i, j) * x[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

BandedMatrix::Factor BandedMatrix::factor(double rcond_min) const {
  Factor f;
  f.n_ = n_;
  f.kl_ = kl_;
  f.ku_ = ku_;
  f.ldab_ = ldab_;
  f.lu_ = ab_;
  f.ipiv_.resize(static_cast<size_t>(n_));

  // 1-norm of A for the condition estimate, from the band.
  double anorm = 0.0;
  for (int j = 0; j < n_; ++j) {
    double col = 0.0;
    const int lo = std::max(0, j - ku_);
    const int hi = std::min(n_ - 1, j + kl_);
    for (int i = lo; i <= hi; ++i) col += std::abs(get(i, j));
    anorm = std::max(anorm, col);
  }

  lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, lp(f.lu_.data()), ldab_, f.ipiv_.data());
  if (info != 0) throw NumericError("solve_banded: exactly singular factorization (zgbtrf info=" + std::to_string(info) + ")", 0.0);

  double rcond = 0.0;
  info = LAPACKE_zgbcon(LAPACK_COL_MAJOR, '1', n_, kl_, ku_, lp(f.lu_.data()), ldab_, f.ipiv_.data(), anorm, &rcond);
  if (info != 0) throw NumericError("solve_banded: condition estimate failed", 0.0);
  f.rcond_ = rcond;
  if (rcond < rcond_min)
    throw NumericError("solve_banded: singular to tolerance (rcond=" + std::to_string(rcond) + ")", rcond);
  return f;
}

void BandedMatrix::Factor::solve_in_place(std::span<Complex> rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("Factor::solve size mismatch");
  lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, lp(lu_.data()), ldab_,
                                   const_cast<int*>(ipiv_.data()), lp(rhs.data()), n_);
  if (info != 0) throw NumericError("solve_banded: back substitution failed", rcond_);
}

std::vector<Complex> BandedMatrix::Factor::solve(std::span<const Complex> rhs) const {
  std::vector<Complex> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

GridFn solve_banded(const BandedMatrix& a, const GridFn& rhs) {
  return GridFn(rhs.grid_ptr(), a.factor().solve(rhs.values()));
}

}  // namespace prandtl
