#include "hnls/bands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "hnls/spectral.hpp"

namespace hnls {
namespace {

constexpr double kPi = std::numbers::pi;

using State4 = std::array<double, 4>;
using State2 = std::array<double, 2>;

// Two solutions of y'' + Q(z + s) y = 0 from z0 to z1 in `steps` equal steps.
State4 propagate(const HillEquation& h, double a, double s, State4 x, double z0, double z1, std::size_t steps) {
  boost::numeric::odeint::runge_kutta_fehlberg78<State4> stepper;
  auto rhs = [&](const State4& y, State4& dy, double z) {
    const double q = h.at(z + s, a);
    dy[0] = y[1];
    dy[1] = -q * y[0];
    dy[2] = y[3];
    dy[3] = -q * y[2];
  };
  const double dz = (z1 - z0) / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) stepper.do_step(rhs, x, z0 + static_cast<double>(i) * dz, dz);
  return x;
}

struct Evaluation {
  State4 end;          // y1, y1', y2, y2' at the end point
  double trace = 0.0;
  double det = 0.0;
  double det_scale = 1.0;
  std::size_t steps = 0;
  double error = 0.0;
};

// Half period for symmetric Q, full period otherwise; step doubling until
// the Richardson estimate of every returned quantity meets the tolerance.
Evaluation evaluate(const HillEquation& h, double a, const FloquetOptions& o) {
  const double period = h.period();
  const auto shift = h.symmetry_shift();
  const double s = shift.value_or(0.0);
  const double span = shift ? 0.5 * period : period;
  auto finish = [&](const State4& y, std::size_t n) {
    Evaluation e{y, 0.0, y[0] * y[3] - y[1] * y[2], std::abs(y[0] * y[3]) + std::abs(y[1] * y[2]), n, 0.0};
    e.trace = shift ? 2.0 * (y[0] * y[3] + y[1] * y[2]) : y[0] + y[3];
    return e;
  };
  std::size_t n = std::max<std::size_t>(o.initial_steps, 2);
  Evaluation prev = finish(propagate(h, a, s, {1, 0, 0, 1}, 0.0, span, n), n);
  while (true) {
    n *= 2;
    if (n > o.max_steps) {
      throw NumericalError("Hill integration did not reach the requested tolerance");
    }
    Evaluation cur = finish(propagate(h, a, s, {1, 0, 0, 1}, 0.0, span, n), n);
    double err = std::abs(cur.trace - prev.trace) / 255.0;
    double ok = err <= o.relative_tolerance * std::max(1.0, std::abs(cur.trace));
    for (int i = 0; i < 4; ++i) {
      const double ei = std::abs(cur.end[i] - prev.end[i]) / 255.0;
      ok = ok && ei <= o.relative_tolerance * std::max(1.0, std::abs(cur.end[i]));
      err = std::max(err, ei);
    }
    cur.error = err;
    if (ok) return cur;
    prev = cur;
  }
}

// Functions whose zeros are band edges: symmetric Q uses the half-period
// factors of trM - 2 = 4 y1' y2 and trM + 2 = 4 y1 y2'.
std::vector<std::pair<double, EdgeKind>> edge_functions(const HillEquation& h, const Evaluation& e) {
  if (h.symmetry_shift()) {
    return {{e.end[1], EdgeKind::Periodic},
            {e.end[2], EdgeKind::Periodic},
            {e.end[0], EdgeKind::Antiperiodic},
            {e.end[3], EdgeKind::Antiperiodic}};
  }
  return {{e.trace - 2.0, EdgeKind::Periodic}, {e.trace + 2.0, EdgeKind::Antiperiodic}};
}

double bisect(const HillEquation& h, std::size_t which, double lo, double hi, double flo,
              const FloquetOptions& o) {
  while (hi - lo > o.edge_tolerance * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = edge_functions(h, evaluate(h, mid, o))[which].first;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

FloquetSample to_sample(double a, const Evaluation& e, double period) {
  FloquetSample s;
  s.parameter = a;
  s.trace = e.trace;
  s.determinant = e.det;
  s.det_scale = e.det_scale;
  s.steps = e.steps;
  s.error_estimate = e.error;
  const double half = 0.5 * e.trace;
  s.stable = std::abs(e.trace) <= 2.0;
  if (s.stable) {
    s.nu = {std::acos(std::clamp(half, -1.0, 1.0)) / period, 0.0};
  } else if (half > 0.0) {
    s.nu = {0.0, std::acosh(half) / period};
  } else {
    s.nu = {kPi / period, std::acosh(-half) / period};
  }
  return s;
}

}  // namespace

double det_drift(const FloquetSample& s) {
  return std::abs(s.determinant - 1.0) / std::max(1.0, s.det_scale);
}

PhaseMode PhaseMode::from(const MEParams& p, double amplitude, const PhysicalConstants& c) {
  c.validate();
  if (p.d1 == 0.0) throw InvalidArgument("phase mode needs D1 != 0");
  PhaseMode m;
  m.amplitude = amplitude;
  m.omega = c.hbar / (p.d1 * c.mass);
  if (!(m.omega > 0.0)) throw InvalidArgument("phase mode needs omega > 0 (D1 > 0)");
  return m;
}

double PhaseMode::wavenumber() const { return std::sqrt(omega); }
double PhaseMode::period() const { return 2.0 * kPi / wavenumber(); }

RealField PhaseMode::gradient(const Grid& g) const {
  if (g.dims() != 1) throw InvalidArgument("phase mode is one-dimensional");
  RealField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = amplitude * std::cos(wavenumber() * g.coord(0, j) + offset) + drift;
  }
  return f;
}

RealField PhaseMode::phase(const Grid& g) const {
  if (g.dims() != 1) throw InvalidArgument("phase mode is one-dimensional");
  RealField f(g);
  const double k = wavenumber();
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = g.coord(0, j);
    f[j] = amplitude / k * std::sin(k * x + offset) + drift * x;
  }
  return f;
}

double stationary_flux_residual(const RealField& rho, const RealField& sp, const MEParams& p,
                                const PhysicalConstants& c) {
  c.validate();
  if (p.d1 == 0.0) throw InvalidArgument("stationary flux needs D1 != 0");
  if (rho.grid() != sp.grid() || rho.grid().dims() != 1) {
    throw InvalidArgument("stationary flux takes 1D fields on one grid");
  }
  const double omega = c.hbar / (p.d1 * c.mass);
  const RealField s3 = spectral_derivative(sp, 2, 0);
  RealField flux(rho.grid());
  for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = rho[i] * (s3[i] + omega * sp[i]);
  return max_abs(spectral_derivative(flux, 1, 0));
}

HillEquation HillEquation::constant(double a) { return HillEquation{a, {}, std::nullopt}; }

HillEquation HillEquation::mathieu(double a, double q) {
  // the harmonic stays listed at q = 0 so the period is still π
  return HillEquation{a, {{2, -q, 0.0}}, std::nullopt};
}

void HillEquation::validate() const {
  if (!std::isfinite(q0)) throw InvalidArgument("Hill constant term is not finite");
  for (const auto& hk : harmonics) {
    if (hk.k < 1) throw InvalidArgument("Hill harmonic order must be positive");
    if (!std::isfinite(hk.q) || !std::isfinite(hk.phase)) throw InvalidArgument("Hill harmonic is not finite");
  }
}

double HillEquation::at(double z, double a) const {
  double q = a;
  for (const auto& hk : harmonics) q += 2.0 * hk.q * std::cos(hk.k * z + hk.phase);
  return q;
}

double HillEquation::operator()(double z) const { return at(z, q0); }

double HillEquation::period() const {
  int g = 0;
  for (const auto& hk : harmonics) g = std::gcd(g, hk.k);
  return g == 0 ? 2.0 * kPi : 2.0 * kPi / g;
}

bool HillEquation::pure_mathieu() const {
  bool two = false;
  for (const auto& hk : harmonics) {
    if (hk.k == 2) {
      two = true;
    } else if (hk.q != 0.0) {
      return false;
    }
  }
  return two;
}

std::optional<double> HillEquation::symmetry_shift() const {
  // φ_k + k s ≡ 0 (mod π) for every active harmonic. Candidates come from the
  // lowest active order; each is checked against the rest.
  const HillHarmonic* first = nullptr;
  for (const auto& hk : harmonics) {
    if (hk.q != 0.0 && (!first || hk.k < first->k)) first = &hk;
  }
  if (!first) return 0.0;
  for (int j = 0; j < 2 * first->k; ++j) {
    const double s = (j * kPi - first->phase) / first->k;
    bool ok = true;
    for (const auto& hk : harmonics) {
      if (hk.q == 0.0) continue;
      const double r = std::remainder(hk.phase + hk.k * s, kPi);
      ok = ok && std::abs(r) < 1e-12;
    }
    if (ok) return std::remainder(s, period());
  }
  return std::nullopt;
}

HillEquation hill_from_stationary(const MEParams& p, double amplitude, double energy, const PhysicalConstants& c) {
  c.validate();
  if (!(p.d1 > 0.0)) throw InvalidArgument("band structure needs D1 > 0");
  if (p.b6 != 0.0) throw InvalidArgument("Hill reduction needs b6 = 0");
  const double omega = c.hbar / (p.d1 * c.mass);
  const double k = std::sqrt(omega);
  const double a2 = amplitude * amplitude;
  HillEquation h;
  h.q0 = 2.0 * c.mass * energy / (c.hbar * c.hbar * omega) - a2 / (2.0 * omega);
  // (S')² = A²/2 (1 + cos 2z). H_R = ħ b1 ΔΔS puts (2m b1/ħ) S'''' = (2m b1/ħ) A k³ sin z
  // into Q, written as 2q cos(z + π/2). Taking half of that leaves Bloch states drifting.
  if (amplitude != 0.0) h.harmonics.push_back({2, -a2 / (4.0 * omega), 0.0});
  if (amplitude != 0.0 && p.b1 != 0.0) {
    h.harmonics.push_back({1, c.mass * p.b1 * amplitude * k / c.hbar, kPi / 2.0});
  }
  h.provenance = HillProvenance{amplitude, energy, p, k};
  return h;
}

FloquetSample floquet_at(const HillEquation& h, double a, const FloquetOptions& o) {
  h.validate();
  if (!std::isfinite(a)) throw InvalidArgument("spectral parameter is not finite");
  const Evaluation e = evaluate(h, a, o);
  FloquetSample s = to_sample(a, e, h.period());
  if (det_drift(s) > 1e-10) throw NumericalError("monodromy determinant drifted from 1");
  return s;
}

FloquetResult floquet_analyze(const HillEquation& h, double a_min, double a_max, std::size_t samples,
                              const FloquetOptions& o) {
  h.validate();
  if (!std::isfinite(a_min) || !std::isfinite(a_max) || !(a_max > a_min)) {
    throw InvalidArgument("spectral parameter range must be finite and increasing");
  }
  if (samples < 2) throw InvalidArgument("need at least two samples");
  FloquetResult r;
  r.tolerance = o.relative_tolerance;
  std::vector<Evaluation> evals;
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = a_min + (a_max - a_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
    evals.push_back(evaluate(h, a, o));
    r.samples.push_back(to_sample(a, evals.back(), h.period()));
    if (det_drift(r.samples.back()) > 1e-10) {
      throw NumericalError("monodromy determinant drifted from 1");
    }
  }
  for (std::size_t i = 0; i + 1 < samples; ++i) {
    const auto f0 = edge_functions(h, evals[i]);
    const auto f1 = edge_functions(h, evals[i + 1]);
    for (std::size_t w = 0; w < f0.size(); ++w) {
      const double lo = r.samples[i].parameter, hi = r.samples[i + 1].parameter;
      if (f0[w].first == 0.0) {
        r.edges.push_back({lo, f0[w].second});
      } else if (f1[w].first != 0.0 && (f0[w].first < 0.0) != (f1[w].first < 0.0)) {
        r.edges.push_back({bisect(h, w, lo, hi, f0[w].first, o), f0[w].second});
      }
    }
  }
  const auto& last = edge_functions(h, evals.back());
  for (const auto& [v, kind] : last) {
    if (v == 0.0) r.edges.push_back({a_max, kind});
  }
  std::sort(r.edges.begin(), r.edges.end(), [](const BandEdge& x, const BandEdge& y) {
    return x.parameter < y.parameter || (x.parameter == y.parameter && x.kind < y.kind);
  });
  auto same = [&](const BandEdge& x, const BandEdge& y) {
    return x.kind == y.kind &&
           std::abs(x.parameter - y.parameter) <= 10.0 * o.edge_tolerance * std::max(1.0, std::abs(x.parameter));
  };
  r.edges.erase(std::unique(r.edges.begin(), r.edges.end(), same), r.edges.end());
  return r;
}

std::optional<double> lowest_band_edge(const HillEquation& h, double a_min, double a_max, std::size_t samples,
                                       const FloquetOptions& o) {
  const FloquetResult r = floquet_analyze(h, a_min, a_max, samples, o);
  if (r.edges.empty()) return std::nullopt;
  return r.edges.front().parameter;
}

std::vector<double> hill_solution(const HillEquation& h, double a, int parity, const std::vector<double>& z,
                                  double max_step) {
  h.validate();
  if (parity != 1 && parity != -1) throw InvalidArgument("parity must be +1 or -1");
  if (!(max_step > 0.0)) throw InvalidArgument("max_step must be positive");
  const auto shift = h.symmetry_shift();
  if (!shift) throw InvalidArgument("Hill potential has no symmetry point");
  const double s = *shift;
  boost::numeric::odeint::runge_kutta_fehlberg78<State2> stepper;
  auto rhs = [&](const State2& y, State2& dy, double t) {
    dy[0] = y[1];
    dy[1] = -h.at(t, a) * y[0];
  };
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return z[i] < z[j]; });
  std::vector<double> out(z.size());
  const State2 start = parity == 1 ? State2{1.0, 0.0} : State2{0.0, 1.0};
  auto march = [&](auto begin, auto end) {
    State2 y = start;
    double t = s;
    for (auto it = begin; it != end; ++it) {
      const double target = z[*it];
      const auto n = static_cast<std::size_t>(std::ceil(std::abs(target - t) / max_step));
      const double dz = n ? (target - t) / static_cast<double>(n) : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        stepper.do_step(rhs, y, t, dz);
        t += dz;
      }
      t = target;
      out[*it] = y[0];
    }
  };
  auto split = std::partition_point(order.begin(), order.end(), [&](std::size_t i) { return z[i] < s; });
  march(split, order.end());
  march(std::make_reverse_iterator(split), order.rend());
  return out;
}

}  // namespace hnls
