#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hnls/errors.hpp"
#include "hnls/grid.hpp"

namespace hnls {

using Complex = std::complex<double>;

/// Samples of a real or complex quantity on a Grid.
template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(Grid grid) : grid_(std::move(grid)), data_(grid_.size(), T{}) {}
  Field(Grid grid, std::vector<T> data) : grid_(std::move(grid)), data_(std::move(data)) {
    if (data_.size() != grid_.size()) {
      throw InvalidArgument("field sample count does not match grid");
    }
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& v) {
      if constexpr (std::is_same_v<T, Complex>) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
      } else {
        return std::isfinite(v);
      }
    });
  }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  template <class S>
  Field& operator*=(S s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  template <class S>
  friend Field operator*(S s, Field a) {
    return a *= s;
  }

 private:
  void check_same(const Field& o) const {
    if (o.grid_ != grid_) throw InvalidArgument("fields live on different grids");
  }

  Grid grid_;
  std::vector<T> data_;
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

RealField density(const ComplexField& psi);

/// Rectangle-rule integral over the periodic box.
double integrate(const RealField& f);
double norm(const ComplexField& psi);

double max_abs(const RealField& f);
double max_abs(const ComplexField& f);
double max_abs_difference(const ComplexField& a, const ComplexField& b);
double max_abs_difference(const RealField& a, const RealField& b);

/// Coordinate field x_axis (centred) sampled on the grid.
RealField coordinate(const Grid& grid, int axis);

}  // namespace hnls
