#include "hnls/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hnls/errors.hpp"
#include "hnls/field.hpp"

namespace hnls {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid Grid::make(int dims, std::size_t n, double length) {
  if (dims != 1 && dims != 2) throw InvalidArgument("grid dims must be 1 or 2");
  return make(std::vector<std::size_t>(dims, n), std::vector<double>(dims, length));
}

Grid Grid::make(std::vector<std::size_t> n, std::vector<double> length) {
  if (n.empty() || n.size() > 2 || n.size() != length.size()) {
    throw InvalidArgument("grid needs 1 or 2 axes with matching n and L");
  }
  Grid g;
  g.dims_ = static_cast<int>(n.size());
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (!is_power_of_two(n[a])) {
      throw InvalidArgument("grid points per axis must be a power of two, got " + std::to_string(n[a]));
    }
    if (n[a] < kMinPoints) {
      throw InvalidArgument("grid needs at least 16 points per axis, got " + std::to_string(n[a]));
    }
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw InvalidArgument("box length must be positive");
    }
    g.n_[a] = n[a];
    g.length_[a] = length[a];
  }
  return g;
}

std::size_t Grid::size() const { return dims_ == 1 ? n_[0] : n_[0] * n_[1]; }

double Grid::cell_volume() const { return dims_ == 1 ? dx(0) : dx(0) * dx(1); }

double Grid::coord(int axis, std::size_t j) const {
  return -0.5 * length_[axis] + static_cast<double>(j) * dx(axis);
}

double Grid::wavenumber(int axis, std::size_t j) const {
  const auto n = static_cast<std::ptrdiff_t>(n_[axis]);
  auto m = static_cast<std::ptrdiff_t>(j);
  if (m >= n / 2) m -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_[axis];
}

double Grid::nyquist(int axis) const {
  return std::numbers::pi * static_cast<double>(n_[axis]) / length_[axis];
}

std::array<std::size_t, 2> Grid::unflatten(std::size_t flat) const {
  if (dims_ == 1) return {flat, 0};
  return {flat / n_[1], flat % n_[1]};
}

bool Grid::operator==(const Grid& o) const {
  if (dims_ != o.dims_) return false;
  for (int a = 0; a < dims_; ++a) {
    if (n_[a] != o.n_[a] || length_[a] != o.length_[a]) return false;
  }
  return true;
}

RealField density(const ComplexField& psi) {
  RealField rho(psi.grid());
  for (std::size_t i = 0; i < psi.size(); ++i) rho[i] = std::norm(psi[i]);
  return rho;
}

double integrate(const RealField& f) {
  // Fixed-order summation keeps results bit-reproducible.
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double norm(const ComplexField& psi) { return integrate(density(psi)); }

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const Complex& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const ComplexField& a, const ComplexField& b) {
  if (a.grid() != b.grid()) throw InvalidArgument("fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_difference(const RealField& a, const RealField& b) {
  if (a.grid() != b.grid()) throw InvalidArgument("fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RealField coordinate(const Grid& grid, int axis) {
  RealField x(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) x[i] = grid.coord(axis, grid.unflatten(i)[axis]);
  return x;
}

}  // namespace hnls
