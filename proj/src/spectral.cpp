#include "hnls/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace hnls {
namespace {

// FFTW planning is not thread-safe; execution through the new-array
// interface is. Plans are cached per shape and direction.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& g, int sign) {
    const auto key = std::make_tuple(g.dims(), g.n(0), g.dims() == 2 ? g.n(1) : 1, sign);
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> in(g.size()), out(g.size());
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = g.dims() == 1
                      ? fftw_plan_dft_1d(static_cast<int>(g.n(0)), pin, pout, sign, flags)
                      : fftw_plan_dft_2d(static_cast<int>(g.n(0)), static_cast<int>(g.n(1)), pin,
                                         pout, sign, flags);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, std::size_t, int>, fftw_plan> plans_;
};

void execute(const Grid& g, int sign, const Complex* in, Complex* out) {
  fftw_plan p = PlanCache::instance().get(g, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

Complex ik_power(double k, int order, bool nyquist) {
  if (order == 0) return 1.0;
  if (nyquist && (order % 2 == 1)) return 0.0;
  Complex r = 1.0;
  for (int i = 0; i < order; ++i) r *= Complex(0.0, k);
  return r;
}

std::vector<Complex> build_symbol(const Grid& g, const MultiIndex& alpha) {
  std::vector<Complex> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    Complex v = 1.0;
    for (int a = 0; a < g.dims(); ++a) {
      const bool nyq = idx[a] == g.n(a) / 2;
      v *= ik_power(g.wavenumber(a, idx[a]), alpha.p[a], nyq);
    }
    s[i] = v;
  }
  return s;
}

// symbols are rebuilt per call otherwise, which dominated 2D jet setup
std::shared_ptr<const std::vector<Complex>> derivative_symbol(const Grid& g, const MultiIndex& alpha) {
  using Key = std::tuple<int, std::size_t, std::size_t, double, double, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<Complex>>> cache;
  const bool two = g.dims() == 2;
  const Key key{g.dims(), g.n(0), two ? g.n(1) : 1, g.length(0), two ? g.length(1) : 0.0, alpha.p[0], alpha.p[1]};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<const std::vector<Complex>>(build_symbol(g, alpha))).first;
  }
  return it->second;
}

ComplexField to_complex(const RealField& f) {
  ComplexField c(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = f[i];
  return c;
}

RealField real_part(const ComplexField& c) {
  RealField r(c.grid());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

}  // namespace

ComplexField fft_forward(const ComplexField& f) {
  ComplexField out(f.grid());
  execute(f.grid(), FFTW_FORWARD, f.data().data(), out.data().data());
  return out;
}

ComplexField fft_inverse(const ComplexField& f) {
  ComplexField out(f.grid());
  execute(f.grid(), FFTW_BACKWARD, f.data().data(), out.data().data());
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& v : out.data()) v *= scale;
  return out;
}

ComplexField apply_symbol(const ComplexField& f, std::span<const Complex> symbol) {
  if (symbol.size() != f.size()) throw InvalidArgument("symbol size does not match grid");
  ComplexField spec = fft_forward(f);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= symbol[i];
  return fft_inverse(spec);
}

ComplexField spectral_derivative(const ComplexField& f, int order, int axis) {
  if (order < 1 || order > 4) throw InvalidArgument("derivative order must be 1..4");
  if (axis < 0 || axis >= f.grid().dims()) throw InvalidArgument("derivative axis out of range");
  MultiIndex alpha;
  alpha.p[axis] = order;
  return apply_symbol(f, *derivative_symbol(f.grid(), alpha));
}

RealField spectral_derivative(const RealField& f, int order, int axis) {
  return real_part(spectral_derivative(to_complex(f), order, axis));
}

std::vector<ComplexField> spectral_partials(const ComplexField& f,
                                            std::span<const MultiIndex> alphas) {
  const ComplexField spec = fft_forward(f);
  std::vector<ComplexField> out;
  out.reserve(alphas.size());
  ComplexField work(f.grid());
  for (const MultiIndex& alpha : alphas) {
    const auto sym = derivative_symbol(f.grid(), alpha);
    for (std::size_t i = 0; i < spec.size(); ++i) work[i] = spec[i] * (*sym)[i];
    out.push_back(fft_inverse(work));
  }
  return out;
}

std::vector<RealField> gradient(const RealField& f) {
  std::vector<RealField> g;
  for (int a = 0; a < f.grid().dims(); ++a) g.push_back(spectral_derivative(f, 1, a));
  return g;
}

RealField divergence(std::span<const RealField> v) {
  if (v.empty()) throw InvalidArgument("divergence of empty vector field");
  if (static_cast<int>(v.size()) != v[0].grid().dims()) {
    throw InvalidArgument("vector field component count must equal grid dims");
  }
  RealField d(v[0].grid());
  for (int a = 0; a < static_cast<int>(v.size()); ++a) d += spectral_derivative(v[a], 1, a);
  return d;
}

ComplexField laplacian(const ComplexField& f) {
  const auto k2 = wavenumber_squared(f.grid());
  std::vector<Complex> sym(k2.begin(), k2.end());
  for (auto& s : sym) s = -s;
  return apply_symbol(f, sym);
}

std::vector<double> wavenumber_squared(const Grid& g) {
  std::vector<double> k2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    double s = 0.0;
    for (int a = 0; a < g.dims(); ++a) {
      const double k = g.wavenumber(a, idx[a]);
      s += k * k;
    }
    k2[i] = s;
  }
  return k2;
}

ComplexField translate(const ComplexField& f, std::array<double, 2> shift) {
  const Grid& g = f.grid();
  std::vector<Complex> sym(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    double phase = 0.0;
    for (int a = 0; a < g.dims(); ++a) phase -= g.wavenumber(a, idx[a]) * shift[a];
    sym[i] = std::polar(1.0, phase);
  }
  return apply_symbol(f, sym);
}

}  // namespace hnls
