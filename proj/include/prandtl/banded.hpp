#pragma once

#include <memory>
#include <span>
#include <vector>

#include "prandtl/grid.hpp"

namespace prandtl {

/// Square complex banded matrix with kl sub- and ku super-diagonals, stored
/// in LAPACK band layout so it can be factored in place by zgbtrf.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  /// Entry (row, col); col must lie within the band of row.
  Complex& at(int row, int col);
  Complex get(int row, int col) const;
  bool in_band(int row, int col) const { return col - row <= ku_ && row - col <= kl_; }

  std::vector<Complex> multiply(std::span<const Complex> x) const;

  /// LU factorization with partial pivoting. Throws NumericError (carrying the
  /// reciprocal condition estimate) when the matrix is singular to tolerance.
  class Factor {
   public:
    std::vector<Complex> solve(std::span<const Complex> rhs) const;
    void solve_in_place(std::span<Complex> rhs) const;
    double rcond() const { return rcond_; }

   private:
    friend class BandedMatrix;
    int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    double rcond_ = 0.0;
    std::vector<Complex> lu_;
    std::vector<int> ipiv_;
  };

  Factor factor(double rcond_min = 1e-14) const;

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<Complex> ab_;
};

/// Solve A f = rhs; relative residual <= 1e-12 on well-conditioned systems.
GridFn solve_banded(const BandedMatrix& a, const GridFn& rhs);

}  // namespace prandtl
