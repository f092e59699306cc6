#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hnls/spectral.hpp"

namespace hnls {

/// Ordering of the multi-indices of total order <= max_order, grouped by
/// total order. In one dimension index k is d^k/dx^k.
class JetLayout {
 public:
  static constexpr int kMaxOrder = 4;

  JetLayout(int dims, int order);

  int dims() const { return dims_; }
  int order() const { return order_; }
  std::size_t count() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  std::size_t index_of(const MultiIndex& m) const;

 private:
  int dims_;
  int order_;
  std::vector<MultiIndex> indices_;
};

/// Truncated derivative jet of a scalar field: every partial derivative up to
/// a fixed total order, sampled at each grid point.
///
/// Jets close under sums and products (Leibniz rule), and differentiation
/// lowers the order by one, so composites like Δ(∇ρ/ρ · ∇S) are formed
/// exactly from pointwise data without re-transforming.
class Jet {
 public:
  Jet(int dims, int order, std::size_t points);

  int dims() const { return layout_.dims(); }
  int order() const { return layout_.order(); }
  std::size_t points() const { return points_; }

  std::span<double> operator[](const MultiIndex& m);
  std::span<const double> operator[](const MultiIndex& m) const;
  std::span<const double> value() const { return (*this)[MultiIndex{}]; }

  Jet derivative(int axis) const;
  Jet laplacian() const;
  std::vector<Jet> gradient() const;
  /// Same data truncated to a lower order.
  Jet truncated(int order) const;

  Jet& operator*=(double s);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(double s, Jet a) { return a *= s; }

 private:
  JetLayout layout_;
  std::size_t points_;
  std::vector<double> coeff_;  // [index][point]
};

Jet dot(std::span<const Jet> a, std::span<const Jet> b);

}  // namespace hnls
