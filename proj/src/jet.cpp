#include "hnls/jet.hpp"

#include <algorithm>

#include "hnls/errors.hpp"

namespace hnls {
namespace {

constexpr double kBinomial[5][5] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

}  // namespace

JetLayout::JetLayout(int dims, int order) : dims_(dims), order_(order) {
  if (dims != 1 && dims != 2) throw InvalidArgument("jet dims must be 1 or 2");
  if (order < 0 || order > kMaxOrder) throw InvalidArgument("jet order must be 0..4");
  for (int total = 0; total <= order; ++total) {
    if (dims == 1) {
      indices_.push_back(MultiIndex{{total, 0}});
    } else {
      for (int i = total; i >= 0; --i) indices_.push_back(MultiIndex{{i, total - i}});
    }
  }
}

std::size_t JetLayout::index_of(const MultiIndex& m) const {
  const int total = m.order();
  if (total > order_ || m.p[0] < 0 || m.p[1] < 0 || (dims_ == 1 && m.p[1] != 0)) {
    throw InvalidArgument("multi-index outside jet layout");
  }
  if (dims_ == 1) return static_cast<std::size_t>(total);
  // Orders below `total` occupy total*(total+1)/2 slots.
  return static_cast<std::size_t>(total * (total + 1) / 2 + (total - m.p[0]));
}

Jet::Jet(int dims, int order, std::size_t points)
    : layout_(dims, order), points_(points), coeff_(layout_.count() * points, 0.0) {}

std::span<double> Jet::operator[](const MultiIndex& m) {
  return {coeff_.data() + layout_.index_of(m) * points_, points_};
}

std::span<const double> Jet::operator[](const MultiIndex& m) const {
  return {coeff_.data() + layout_.index_of(m) * points_, points_};
}

Jet Jet::derivative(int axis) const {
  if (order() == 0) throw InvalidArgument("cannot differentiate an order-0 jet");
  if (axis < 0 || axis >= dims()) throw InvalidArgument("jet axis out of range");
  Jet r(dims(), order() - 1, points_);
  for (const MultiIndex& m : r.layout_.indices()) {
    MultiIndex up = m;
    ++up.p[axis];
    auto src = (*this)[up];
    std::copy(src.begin(), src.end(), r[m].begin());
  }
  return r;
}

Jet Jet::laplacian() const {
  Jet r = derivative(0).derivative(0);
  if (dims() == 2) r = r + derivative(1).derivative(1);
  return r;
}

std::vector<Jet> Jet::gradient() const {
  std::vector<Jet> g;
  for (int a = 0; a < dims(); ++a) g.push_back(derivative(a));
  return g;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw InvalidArgument("cannot raise jet order");
  Jet r(dims(), order, points_);
  std::copy_n(coeff_.begin(), r.coeff_.size(), r.coeff_.begin());
  return r;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeff_) c *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  Jet r = a.truncated(order);
  for (std::size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] += b.coeff_[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  Jet r = a.truncated(order);
  for (std::size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] -= b.coeff_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.dims() != b.dims() || a.points_ != b.points_) throw InvalidArgument("jet shape mismatch");
  const int order = std::min(a.order(), b.order());
  Jet r(a.dims(), order, a.points_);
  const std::size_t n = a.points_;
  for (const MultiIndex& m : r.layout_.indices()) {
    auto out = r[m];
    for (int i = 0; i <= m.p[0]; ++i) {
      for (int j = 0; j <= m.p[1]; ++j) {
        const double c = kBinomial[m.p[0]][i] * kBinomial[m.p[1]][j];
        auto fa = a[MultiIndex{{i, j}}];
        auto fb = b[MultiIndex{{m.p[0] - i, m.p[1] - j}}];
        for (std::size_t p = 0; p < n; ++p) out[p] += c * fa[p] * fb[p];
      }
    }
  }
  return r;
}

Jet dot(std::span<const Jet> a, std::span<const Jet> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("jet vector size mismatch");
  Jet r = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) r = r + a[i] * b[i];
  return r;
}

}  // namespace hnls
