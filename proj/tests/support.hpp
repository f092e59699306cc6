#pragma once

#include <cmath>
#include <numbers>

#include "hnls/states.hpp"

namespace test {

using namespace hnls;

inline constexpr double pi = std::numbers::pi;

// Band-limited nodeless state. Low cutoff and amplitude keep ∇Ψ/Ψ resolved
// well past the cutoff, so products of derived fields stay alias-free.
inline ComplexField random_state(const Grid& g, std::uint64_t seed, double amplitude = 0.2) {
  StateParams p;
  p.seed = seed;
  p.amplitude = amplitude;
  p.cutoff = std::max<std::size_t>(2, g.n(0) / 32);
  return make_state(StateKind::Random, p, g);
}

// Library default: modes up to n/8, amplitude 0.5. Large derivatives.
inline ComplexField rough_state(const Grid& g, std::uint64_t seed) {
  StateParams p;
  p.seed = seed;
  return make_state(StateKind::Random, p, g);
}

inline ComplexField from_function(const Grid& g, auto f) {
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    const double x = g.coord(0, idx[0]);
    const double y = g.dims() > 1 ? g.coord(1, idx[1]) : 0.0;
    out[i] = f(x, y);
  }
  return out;
}

inline RealField real_from_function(const Grid& g, auto f) {
  RealField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    const double x = g.coord(0, idx[0]);
    const double y = g.dims() > 1 ? g.coord(1, idx[1]) : 0.0;
    out[i] = f(x, y);
  }
  return out;
}

// max over points where mask(i) is false
inline double max_abs_unmasked(const RealField& f, const HydroView& h) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!h.masked(i)) m = std::max(m, std::abs(f[i]));
  }
  return m;
}

}  // namespace test
