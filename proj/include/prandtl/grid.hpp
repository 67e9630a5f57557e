#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace prandtl {

using Complex = std::complex<double>;

enum class GridKind { y, z, x };

/// Strictly increasing 1-D node set. Flavors:
///   y: wall-normal, [0, y_max], y_max > 0
///   z: shear-layer, [-z_max, z_max], symmetric, contains 0
///   x: streamwise, [0, X]
class Grid {
 public:
  /// y-grid clustered at the wall by y(zeta) = y_max * sinh(stretch*zeta)/sinh(stretch),
  /// zeta uniform in [0,1]; stretch = 0 is the affine map.
  static Grid stretched_y(double y_max, int count, double stretch);
  static Grid uniform_y(double y_max, int count);
  /// Symmetric z-grid on [-z_max, z_max]; count must be odd so 0 is a node.
  static Grid symmetric_z(double z_max, int count);
  static Grid uniform_x(double x_end, int count);
  static Grid from_nodes(GridKind kind, std::vector<double> nodes);

  GridKind kind() const { return kind_; }
  int count() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double extent() const { return nodes_.back(); }
  /// Spacing of cell i: node(i+1) - node(i).
  double spacing(int i) const { return nodes_[static_cast<size_t>(i) + 1] - nodes_[static_cast<size_t>(i)]; }
  /// Index of the node closest to the value v.
  int nearest(double v) const;

 private:
  Grid(GridKind kind, std::vector<double> nodes);
  void validate() const;

  GridKind kind_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(Grid g);

/// Complex scalar samples on a grid. Immutable grids are shared; values are
/// plain storage, cheap to copy and safe to share once construction is done.
class GridFn {
 public:
  GridFn() = default;
  explicit GridFn(GridPtr grid) : grid_(std::move(grid)), values_(grid_ ? grid_->count() : 0, Complex(0.0)) {}
  GridFn(GridPtr grid, std::vector<Complex> values);

  static GridFn sample(const GridPtr& grid, const std::function<Complex(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  Complex operator[](int i) const { return values_[static_cast<size_t>(i)]; }
  Complex& operator[](int i) { return values_[static_cast<size_t>(i)]; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }

  bool all_finite() const;
  /// max_i |f_i|
  double max_abs() const;

  GridFn& operator+=(const GridFn& other);
  GridFn& operator-=(const GridFn& other);
  GridFn& operator*=(Complex c);
  friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
  friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
  friend GridFn operator*(Complex c, GridFn f) { return f *= c; }

 private:
  GridPtr grid_;
  std::vector<Complex> values_;
};

}  // namespace prandtl
