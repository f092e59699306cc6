#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace hnls {

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
};

/// Uniform periodic grid in one or two dimensions.
///
/// Coordinates are centred: x_j = -L/2 + j*dx, j = 0..n-1. Storage of
/// two-dimensional fields is row-major with axis 0 varying slowest.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  /// Square grid with the same n and L on every axis.
  static Grid make(int dims, std::size_t n, double length);
  static Grid make(std::vector<std::size_t> n, std::vector<double> length);

  int dims() const { return dims_; }
  std::size_t n(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  double dx(int axis) const { return length_[axis] / static_cast<double>(n_[axis]); }
  std::size_t size() const;
  double cell_volume() const;
  bool periodic() const { return true; }

  double coord(int axis, std::size_t j) const;
  /// Angular wave number of FFT bin j along axis.
  double wavenumber(int axis, std::size_t j) const;
  double nyquist(int axis) const;

  /// Per-axis index of a flat sample index.
  std::array<std::size_t, 2> unflatten(std::size_t flat) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  Grid() = default;

  int dims_ = 1;
  std::array<std::size_t, 2> n_{1, 1};
  std::array<double, 2> length_{1.0, 1.0};
};

bool is_power_of_two(std::size_t n);

}  // namespace hnls
