#include "prandtl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prandtl {

Grid::Grid(GridKind kind, std::vector<double> nodes) : kind_(kind), nodes_(std::move(nodes)) { validate(); }

void Grid::validate() const {
  if (nodes_.size() < 2) throw std::invalid_argument("grid needs at least 2 nodes");
  for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i] < nodes_[i + 1])) throw std::invalid_argument("grid nodes must be strictly increasing");
  }
  switch (kind_) {
    case GridKind::y:
      if (nodes_.front() != 0.0) throw std::invalid_argument("y-grid must start at 0");
      if (!(nodes_.back() > 0.0)) throw std::invalid_argument("y-grid needs y_max > 0");
      break;
    case GridKind::z: {
      const double zmax = nodes_.back();
      if (std::abs(nodes_.front() + zmax) > 1e-12 * zmax)
        throw std::invalid_argument("z-grid must span [-z_max, z_max]");
      bool has_zero = false;
      for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] == 0.0) has_zero = true;
        const double mirror = nodes_[nodes_.size() - 1 - i];
        if (std::abs(nodes_[i] + mirror) > 1e-12 * zmax)
          throw std::invalid_argument("z-grid must be symmetric about 0");
      }
      if (!has_zero) throw std::invalid_argument("z-grid must contain 0");
      break;
    }
    case GridKind::x:
      if (nodes_.front() != 0.0) throw std::invalid_argument("x-grid must start at 0");
      break;
  }
}

Grid Grid::stretched_y(double y_max, int count, double stretch) {
  if (!(y_max > 0.0)) throw std::invalid_argument("build_stretched_grid: y_max must be positive");
  if (count < 16) throw std::invalid_argument("build_stretched_grid: count must be >= 16");
  if (stretch < 0.0) throw std::invalid_argument("build_stretched_grid: stretch must be >= 0");
  std::vector<double> nodes(static_cast<size_t>(count));
  const double denom = stretch > 0.0 ? std::sinh(stretch) : 1.0;
  for (int i = 0; i < count; ++i) {
    const double zeta = static_cast<double>(i) / (count - 1);
    nodes[static_cast<size_t>(i)] = stretch > 0.0 ? y_max * std::sinh(stretch * zeta) / denom : y_max * zeta;
  }
  nodes.front() = 0.0;
  nodes.back() = y_max;
  return Grid(GridKind::y, std::move(nodes));
}

Grid Grid::uniform_y(double y_max, int count) {
  if (!(y_max > 0.0)) throw std::invalid_argument("uniform_y: y_max must be positive");
  if (count < 2) throw std::invalid_argument("uniform_y: need at least 2 nodes");
  std::vector<double> nodes(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) nodes[static_cast<size_t>(i)] = y_max * static_cast<double>(i) / (count - 1);
  nodes.back() = y_max;
  return Grid(GridKind::y, std::move(nodes));
}

Grid Grid::symmetric_z(double z_max, int count) {
  if (!(z_max > 0.0)) throw std::invalid_argument("z-grid needs z_max > 0");
  if (count < 3 || count % 2 == 0) throw std::invalid_argument("z-grid count must be odd and >= 3");
  std::vector<double> nodes(static_cast<size_t>(count));
  const int half = (count - 1) / 2;
  for (int i = 0; i < count; ++i) nodes[static_cast<size_t>(i)] = z_max * static_cast<double>(i - half) / half;
  nodes[static_cast<size_t>(half)] = 0.0;
  return Grid(GridKind::z, std::move(nodes));
}

Grid Grid::uniform_x(double x_end, int count) {
  if (!(x_end > 0.0)) throw std::invalid_argument("x-grid needs X > 0");
  if (count < 2) throw std::invalid_argument("x-grid needs at least 2 nodes");
  std::vector<double> nodes(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) nodes[static_cast<size_t>(i)] = x_end * static_cast<double>(i) / (count - 1);
  return Grid(GridKind::x, std::move(nodes));
}

Grid Grid::from_nodes(GridKind kind, std::vector<double> nodes) { return Grid(kind, std::move(nodes)); }

int Grid::nearest(double v) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
  if (it == nodes_.begin()) return 0;
  if (it == nodes_.end()) return count() - 1;
  const int hi = static_cast<int>(it - nodes_.begin());
  return (v - nodes_[static_cast<size_t>(hi) - 1] <= nodes_[static_cast<size_t>(hi)] - v) ? hi - 1 : hi;
}

GridPtr make_grid(Grid g) { return std::make_shared<const Grid>(std::move(g)); }

GridFn::GridFn(GridPtr grid, std::vector<Complex> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || static_cast<int>(values_.size()) != grid_->count())
    throw std::invalid_argument("GridFn: values must match grid size");
}

GridFn GridFn::sample(const GridPtr& grid, const std::function<Complex(double)>& f) {
  GridFn out(grid);
  for (int i = 0; i < out.size(); ++i) out[i] = f(grid->node(i));
  return out;
}

bool GridFn::all_finite() const {
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

double GridFn::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFn& GridFn::operator+=(const GridFn& other) {
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFn& GridFn::operator-=(const GridFn& other) {
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFn& GridFn::operator*=(Complex c) {
  for (Complex& v : values_) v *= c;
  return *this;
}

}  // namespace prandtl
