#include "hnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hnls/currents.hpp"
#include "hnls/spectral.hpp"
#include "hnls/states.hpp"

namespace hnls {
namespace {

RealField product(const RealField& a, const RealField& b) {
  RealField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

std::vector<RealField> linear_current(const ComplexField& psi, const PhysicalConstants& c) {
  std::vector<RealField> j;
  for (int a = 0; a < psi.grid().dims(); ++a) {
    const ComplexField d = spectral_derivative(psi, 1, a);
    RealField f(psi.grid());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = c.hbar / c.mass * (std::conj(psi[i]) * d[i]).imag();
    j.push_back(std::move(f));
  }
  return j;
}

// ∫|∂ρ/∂t + ∇·j_lin − (2/ħ)ρH_I| with step-averaged right-hand terms. Used
// where no conserved current exists (linear sets or non-divergence sets).
double source_form_residual(const ComplexField& psi0, const ComplexField& psi1, double dt,
                            const CoeffSet& coeffs, const PhysicalConstants& c, const HydroOptions& options) {
  const Grid& g = psi0.grid();
  auto j0 = linear_current(psi0, c);
  const auto j1 = linear_current(psi1, c);
  for (std::size_t a = 0; a < j0.size(); ++a) j0[a] = 0.5 * (j0[a] + j1[a]);
  RealField r = divergence(j0);
  const RealField rho0 = density(psi0);
  const RealField rho1 = density(psi1);
  for (std::size_t i = 0; i < g.size(); ++i) r[i] += (rho1[i] - rho0[i]) / dt;
  if (!coeffs.is_linear()) {
    for (const ComplexField* p : {&psi0, &psi1}) {
      const HydroView h = hydro_decompose(*p, options);
      const NonlinearPotential w = nonlinear_potential(h, coeffs, c);
      for (std::size_t i = 0; i < g.size(); ++i) r[i] -= h.rho[i] * w.imag[i] / c.hbar;
    }
  }
  for (double& v : r.data()) v = std::abs(v);
  return integrate(r);
}

EhrenfestCorrections corrections_from(const HydroView& h, const CoeffSet& coeffs, const PhysicalConstants& c) {
  EhrenfestCorrections out;
  const Grid& g = h.grid();
  const NonlinearPotential w = nonlinear_potential(h, coeffs, c);
  const auto grad_hr = gradient(w.real);
  const RealField rho_hi = product(h.rho, w.imag);
  for (int a = 0; a < g.dims(); ++a) {
    out.i1[a] = 2.0 * c.mass / c.hbar * integrate_unmasked(product(coordinate(g, a), rho_hi), h);
    RealField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = 2.0 * rho_hi[i] * h.grad_phase[a][i] - h.rho[i] * grad_hr[a][i];
    }
    out.i2[a] = integrate_unmasked(f, h);
  }
  return out;
}

double max_abs2(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

double linear_energy(const ComplexField& psi, const RealField* potential, const PhysicalConstants& c) {
  c.validate();
  const Grid& g = psi.grid();
  RealField f(g);
  for (int a = 0; a < g.dims(); ++a) {
    const ComplexField d = spectral_derivative(psi, 1, a);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += c.hbar * c.hbar / (2.0 * c.mass) * std::norm(d[i]);
  }
  if (potential) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += (*potential)[i] * std::norm(psi[i]);
  }
  return integrate(f);
}

EnergyPair energy(const ComplexField& psi, const RealField* potential, const MEParams& p,
                  const PhysicalConstants& c, const HydroOptions& options) {
  EnergyPair e;
  e.linear = linear_energy(psi, potential, c);
  e.total = e.linear;
  if (p.b1 == p.b6) return e;
  const HydroView h = hydro_decompose(psi, options);
  const Jet bilap = h.phase.laplacian().laplacian();
  RealField f(psi.grid());
  auto v = bilap.value();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = h.rho[i] * v[i];
  e.total += c.hbar * (p.b1 - p.b6) * integrate_unmasked(f, h);
  return e;
}

double energy_expectation(const ComplexField& psi, const RealField* potential, const CoeffSet& coeffs,
                          const PhysicalConstants& c, const HydroOptions& options) {
  double e = linear_energy(psi, potential, c);
  if (coeffs.is_linear()) return e;
  const HydroView h = hydro_decompose(psi, options);
  e += integrate_unmasked(product(h.rho, nonlinear_potential(h, coeffs, c).real), h);
  return e;
}

std::array<double, 2> position_mean(const ComplexField& psi) {
  const RealField rho = density(psi);
  std::array<double, 2> out{};
  for (int a = 0; a < psi.grid().dims(); ++a) out[a] = integrate(product(coordinate(psi.grid(), a), rho));
  return out;
}

std::array<double, 2> momentum_mean(const ComplexField& psi, const PhysicalConstants& c) {
  std::array<double, 2> out{};
  const auto j = linear_current(psi, c);
  for (std::size_t a = 0; a < j.size(); ++a) out[a] = c.mass * integrate(j[a]);
  return out;
}

std::array<double, 2> force_mean(const ComplexField& psi, const RealField& v) {
  if (v.grid() != psi.grid()) throw InvalidArgument("potential lives on a different grid");
  const auto grad_rho = gradient(density(psi));
  std::array<double, 2> out{};
  for (std::size_t a = 0; a < grad_rho.size(); ++a) out[a] = -integrate(product(v, grad_rho[a]));
  return out;
}

EhrenfestCorrections ehrenfest_corrections(const ComplexField& psi, const CoeffSet& coeffs,
                                           const PhysicalConstants& c, const HydroOptions& options) {
  coeffs.validate();
  c.validate();
  require_decayed_tails(psi);
  if (coeffs.is_linear()) return {};
  return corrections_from(hydro_decompose(psi, options), coeffs, c);
}

EhrenfestCorrections ehrenfest_corrections(const ComplexField& psi, const MEParams& p,
                                           const PhysicalConstants& c, const HydroOptions& options) {
  return ehrenfest_corrections(psi, p.expand(), c, options);
}

EhrenfestReport ehrenfest_consistency(const Trajectory& tr, const RealField* v, const CoeffSet& coeffs,
                                      const PhysicalConstants& c, const HydroOptions& options) {
  const std::size_t n = tr.snapshots.size();
  if (n != tr.times.size()) throw InvalidArgument("trajectory snapshots were not kept");
  if (n < 3) throw InvalidArgument("need at least three snapshots");
  std::vector<std::array<double, 2>> x(n), p(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = position_mean(tr.snapshots[k]);
    p[k] = momentum_mean(tr.snapshots[k], c);
  }
  EhrenfestReport rep;
  const int dims = tr.snapshots.front().grid().dims();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const ComplexField& psi = tr.snapshots[k];
    const double span = tr.times[k + 1] - tr.times[k - 1];
    const EhrenfestCorrections corr = ehrenfest_corrections(psi, coeffs, c, options);
    const std::array<double, 2> f = v ? force_mean(psi, *v) : std::array<double, 2>{};
    std::array<double, 2> r1{}, r2{}, u1{}, u2{};
    for (int a = 0; a < dims; ++a) {
      u1[a] = c.mass * (x[k + 1][a] - x[k - 1][a]) / span - p[k][a];
      u2[a] = (p[k + 1][a] - p[k - 1][a]) / span + f[a];
      r1[a] = u1[a] - corr.i1[a];
      r2[a] = u2[a] - corr.i2[a];
    }
    rep.times.push_back(tr.times[k]);
    rep.r1.push_back(r1);
    rep.r2.push_back(r2);
    rep.max_r1 = std::max(rep.max_r1, max_abs2(r1));
    rep.max_r2 = std::max(rep.max_r2, max_abs2(r2));
    rep.max_r1_uncorrected = std::max(rep.max_r1_uncorrected, max_abs2(u1));
    rep.max_r2_uncorrected = std::max(rep.max_r2_uncorrected, max_abs2(u2));
    rep.max_i1 = std::max(rep.max_i1, max_abs2(corr.i1));
    rep.max_i2 = std::max(rep.max_i2, max_abs2(corr.i2));
  }
  return rep;
}

SeparabilityReport separability_test(const ComplexField& psi1, const ComplexField& psi2, const RealField* v1,
                                     const RealField* v2, const SeparabilityConfig& cfg) {
  const Grid& g1 = psi1.grid();
  const Grid& g2 = psi2.grid();
  if (g1.dims() != 1 || g2.dims() != 1) throw InvalidArgument("separability test takes two 1D states");
  if (g1.n(0) * g2.n(0) > 128 * 128) throw InvalidArgument("product grid exceeds 128^2 points");
  if (cfg.samples == 0) throw InvalidArgument("need at least one sample time");
  const ComplexField psi = tensor_product(psi1, psi2);
  const Grid& g = psi.grid();

  auto base = [&](const RealField* v) {
    EvolutionConfig e;
    e.t_end = cfg.t_end;
    e.integrator = cfg.integrator;
    e.coeffs = cfg.coeffs;
    e.constants = cfg.constants;
    e.hydro = cfg.hydro;
    e.norm_drift_tolerance = cfg.norm_drift_tolerance;
    e.record_observables = false;
    if (v) e.potential = *v;
    return e;
  };
  EvolutionConfig e2 = base(nullptr);
  if (v1 || v2) e2.potential = additive_potential(v1 ? *v1 : RealField(g1), v2 ? *v2 : RealField(g2));
  const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(g, e2);
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt - 1e-9));
  const std::size_t stride = std::max<std::size_t>(1, steps / cfg.samples);
  e2.dt = dt;
  e2.stride = stride;
  EvolutionConfig e1a = base(v1), e1b = base(v2);
  for (EvolutionConfig* e : {&e1a, &e1b}) {
    e->dt = dt;
    e->stride = stride;
  }
  const Trajectory t2 = evolve(psi, e2);
  const Trajectory ta = evolve(psi1, e1a);
  const Trajectory tb = evolve(psi2, e1b);

  SeparabilityReport rep;
  rep.dt = t2.dt;
  for (std::size_t k = 0; k < t2.times.size(); ++k) {
    const double d = max_abs_difference(t2.snapshots[k], tensor_product(ta.snapshots[k], tb.snapshots[k]));
    rep.times.push_back(t2.times[k]);
    rep.deviations.push_back(d);
    rep.max_deviation = std::max(rep.max_deviation, d);
  }
  return rep;
}

ObservablesSample sample_observables(double t, const ComplexField& psi, const ComplexField* prev, double dt,
                                     const RealField* v, const CoeffSet& coeffs, const PhysicalConstants& c,
                                     const HydroOptions& options) {
  ObservablesSample s;
  s.t = t;
  s.norm = norm(psi);
  s.x_mean = position_mean(psi);
  s.p_mean = momentum_mean(psi, c);
  s.energy_linear = linear_energy(psi, v, c);
  s.energy_total = s.energy_linear;
  if (!coeffs.is_linear()) {
    const HydroView h = hydro_decompose(psi, options);
    s.energy_total += integrate_unmasked(product(h.rho, nonlinear_potential(h, coeffs, c).real), h);
    const EhrenfestCorrections corr = corrections_from(h, coeffs, c);
    s.i1 = corr.i1;
    s.i2 = corr.i2;
  }
  if (prev) {
    if (!coeffs.is_linear() && coeffs.is_divergence_form(1e-14)) {
      s.continuity_residual = continuity_residual(*prev, psi, dt, coeffs, c, options).l1;
    } else {
      s.continuity_residual = source_form_residual(*prev, psi, dt, coeffs, c, options);
    }
  }
  return s;
}

}  // namespace hnls
