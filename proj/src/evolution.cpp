#include "hnls/evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hnls/currents.hpp"
#include "hnls/diagnostics.hpp"
#include "hnls/spectral.hpp"

namespace hnls {
namespace {

double coefficient_sum(const CoeffSet& c) {
  double s = std::abs(c.forbidden);
  for (double v : c.a) s += std::abs(v);
  for (double v : c.b) s += std::abs(v);
  return s;
}

double max_wavenumber_squared(const Grid& g) {
  double k2 = 0.0;
  for (int a = 0; a < g.dims(); ++a) k2 += g.nyquist(a) * g.nyquist(a);
  return k2;
}

// Kinetic propagator symbol exp(-i hbar k^2 h / 2m).
std::vector<Complex> kinetic_symbol(const Grid& g, double h, const PhysicalConstants& c) {
  auto k2 = wavenumber_squared(g);
  std::vector<Complex> e(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    e[i] = std::polar(1.0, -c.hbar * k2[i] * h / (2.0 * c.mass));
  }
  return e;
}

ComplexField axpy(const ComplexField& x, Complex s, const ComplexField& y) {
  ComplexField out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * y[i];
  return out;
}

// Everything except the kinetic term, used by the integrating-factor stepper.
ComplexField stiff_free_rhs(const ComplexField& psi, const EvolutionConfig& cfg) {
  ComplexField out = cfg.coeffs.is_linear() ? ComplexField(psi.grid())
                                            : nonlinear_part(psi, cfg.coeffs, cfg.constants, cfg.hydro);
  if (cfg.potential) {
    const Complex f(0.0, -1.0 / cfg.constants.hbar);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f * (*cfg.potential)[i] * psi[i];
  }
  return out;
}

ComplexField step_ifrk4(const ComplexField& u, double dt, const std::vector<Complex>& e,
                        const EvolutionConfig& cfg) {
  const double h = 0.5 * dt;
  const ComplexField eu = apply_symbol(u, e);
  const ComplexField k1 = stiff_free_rhs(u, cfg);
  const ComplexField ek1 = apply_symbol(k1, e);
  const ComplexField k2 = stiff_free_rhs(axpy(eu, h, ek1), cfg);
  const ComplexField k3 = stiff_free_rhs(axpy(eu, h, k2), cfg);
  const ComplexField k4 = stiff_free_rhs(apply_symbol(axpy(eu, dt, k3), e), cfg);
  ComplexField inner = eu;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    inner[i] += dt / 6.0 * (ek1[i] + 2.0 * (k2[i] + k3[i]));
  }
  return axpy(apply_symbol(inner, e), dt / 6.0, k4);
}

ComplexField step_rk4(const ComplexField& u, double dt, const EvolutionConfig& cfg) {
  const RealField* v = cfg.potential ? &*cfg.potential : nullptr;
  auto f = [&](const ComplexField& x) { return nonlinear_rhs(x, v, cfg.coeffs, cfg.constants, cfg.hydro); };
  const ComplexField k1 = f(u);
  const ComplexField k2 = f(axpy(u, 0.5 * dt, k1));
  const ComplexField k3 = f(axpy(u, 0.5 * dt, k2));
  const ComplexField k4 = f(axpy(u, dt, k3));
  ComplexField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace

Integrator parse_integrator(const std::string& name) {
  if (name == "ifrk4") return Integrator::IFRK4;
  if (name == "rk4") return Integrator::RK4;
  throw InvalidArgument("unknown integrator '" + name + "'");
}

std::string to_string(Integrator integrator) {
  return integrator == Integrator::IFRK4 ? "ifrk4" : "rk4";
}

double stable_time_step(const Grid& g, const EvolutionConfig& cfg) {
  const double k2 = max_wavenumber_squared(g);
  double rate = 0.0;
  if (cfg.integrator == Integrator::RK4) rate += cfg.constants.hbar * k2 / (2.0 * cfg.constants.mass);
  if (cfg.potential) rate += max_abs(*cfg.potential) / cfg.constants.hbar;
  if (!cfg.coeffs.is_linear()) {
    const double p = cfg.coeffs.variant == Variant::EXT ? 2.0 : 1.0;
    rate += std::abs(cfg.coeffs.coupling) * coefficient_sum(cfg.coeffs) * std::pow(k2, p);
  }
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 2.5 / rate;
}

double default_time_step(const Grid& g, const EvolutionConfig& cfg) {
  const double dt = 0.5 * stable_time_step(g, cfg);
  return std::min(dt, cfg.t_end);
}

NonlinearPotential nonlinear_potential(const HydroView& h, const CoeffSet& coeffs,
                                       const PhysicalConstants& c) {
  const double scale = c.hbar * coeffs.coupling;
  NonlinearPotential out{eval_functional(coeffs.b, coeffs.variant, h),
                         eval_functional(coeffs.a, coeffs.variant, h)};
  if (coeffs.forbidden != 0.0) out.real += forbidden_term(h, coeffs.forbidden);
  out.real *= scale;
  out.imag *= -0.5 * scale;
  return out;
}

ComplexField nonlinear_part(const ComplexField& psi, const CoeffSet& coeffs, const PhysicalConstants& c,
                            const HydroOptions& options) {
  coeffs.validate();
  ComplexField out(psi.grid());
  if (coeffs.is_linear()) return out;
  const HydroView h = hydro_decompose(psi, options);
  const NonlinearPotential w = nonlinear_potential(h, coeffs, c);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Complex(w.real[i], w.imag[i]) * psi[i] / Complex(0.0, c.hbar);
  }
  return out;
}

ComplexField nonlinear_rhs(const ComplexField& psi, const RealField* potential, const CoeffSet& coeffs,
                           const PhysicalConstants& c, const HydroOptions& options) {
  c.validate();
  ComplexField out = nonlinear_part(psi, coeffs, c, options);
  const ComplexField lap = laplacian(psi);
  const Complex kin(0.0, c.hbar / (2.0 * c.mass));
  const Complex pot(0.0, -1.0 / c.hbar);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += kin * lap[i];
    if (potential) out[i] += pot * (*potential)[i] * psi[i];
  }
  return out;
}

Trajectory evolve(const ComplexField& psi0, const EvolutionConfig& cfg) {
  const Grid& g = psi0.grid();
  cfg.constants.validate();
  cfg.coeffs.validate();
  if (!(cfg.t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (cfg.stride == 0) throw InvalidArgument("stride must be at least 1");
  if (!(cfg.norm_drift_tolerance > 0.0)) throw InvalidArgument("norm drift tolerance must be positive");
  if (cfg.potential && cfg.potential->grid() != g) throw InvalidArgument("potential lives on a different grid");
  if (!psi0.all_finite()) throw InvalidArgument("initial state is not finite");

  const double bound = stable_time_step(g, cfg);
  double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(g, cfg);
  if (cfg.dt < 0.0) throw InvalidArgument("dt must be positive");
  if (dt > bound * (1.0 + 1e-12)) {
    throw InvalidArgument("dt exceeds the explicit stability bound " + format_number(bound));
  }
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt - 1e-9));
  dt = cfg.t_end / static_cast<double>(steps);

  const std::vector<Complex> e = kinetic_symbol(g, 0.5 * dt, cfg.constants);
  const RealField* v = cfg.potential ? &*cfg.potential : nullptr;
  const double n0 = norm(psi0);

  Trajectory out;
  out.dt = dt;
  auto record = [&](double t, const ComplexField& psi, const ComplexField* prev) {
    out.times.push_back(t);
    if (cfg.keep_snapshots) out.snapshots.push_back(psi);
    if (cfg.record_observables) {
      out.observables.push_back(
          sample_observables(t, psi, prev, dt, v, cfg.coeffs, cfg.constants, cfg.hydro));
    }
  };
  record(0.0, psi0, nullptr);

  ComplexField psi = psi0;
  double last_good = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    ComplexField prev = psi;
    try {
      psi = cfg.integrator == Integrator::IFRK4 ? step_ifrk4(prev, dt, e, cfg) : step_rk4(prev, dt, cfg);
    } catch (const NumericalError& err) {
      throw EvolutionAborted(std::string("step failed: ") + err.what(), last_good);
    }
    if (!psi.all_finite()) throw EvolutionAborted("non-finite state", last_good);
    const double drift = std::abs(norm(psi) - n0);
    if (!(drift <= cfg.norm_drift_tolerance)) {
      throw EvolutionAborted("norm drift " + format_number(drift) + " above tolerance", last_good);
    }
    const double t = static_cast<double>(s) * dt;
    last_good = t;
    if (s % cfg.stride == 0 || s == steps) record(t, psi, &prev);
  }
  return out;
}

ComplexField galilean_boost(const ComplexField& psi, std::array<double, 2> v, double t,
                            const PhysicalConstants& c, double beta) {
  c.validate();
  if (!std::isfinite(beta) || beta == 0.0) throw InvalidArgument("beta must be finite and nonzero");
  const Grid& g = psi.grid();
  const double m = c.mass / beta;
  for (int a = 0; a < g.dims(); ++a) {
    const double turns = m * v[a] * g.length(a) / (2.0 * std::numbers::pi * c.hbar);
    if (std::abs(turns - std::round(turns)) > 1e-9) {
      throw InvalidArgument("boost momentum is not commensurate with the box");
    }
  }
  if (g.dims() == 1) v[1] = 0.0;
  ComplexField out = translate(psi, {v[0] * t, v[1] * t});
  const double v2 = v[0] * v[0] + v[1] * v[1];
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = g.unflatten(i);
    double px = 0.0;
    for (int a = 0; a < g.dims(); ++a) px += v[a] * g.coord(a, idx[a]);
    out[i] *= std::polar(1.0, m * (px - 0.5 * v2 * t) / c.hbar);
  }
  return out;
}

GaugeFormReport gauge_form_residual(const ComplexField& psi, const MEParams& p, const PhysicalConstants& c,
                                    const HydroOptions& options) {
  c.validate();
  const Grid& g = psi.grid();
  const ComplexField reference = nonlinear_rhs(psi, nullptr, p.expand(), c, options);
  GaugeFormReport rep;
  rep.nonlinear_scale = max_abs(nonlinear_part(psi, p.expand(), c, options));

  ComplexField form = ComplexField(g);
  ComplexField c2_term = ComplexField(g);
  const double k = c.hbar / (2.0 * c.mass);
  if (p.d1 == 0.0) {
    if (p.b1 != 0.0 || p.b6 != 0.0) throw InvalidArgument("vector-potential form needs D1 != 0");
    const ComplexField lap = laplacian(psi);
    for (std::size_t i = 0; i < form.size(); ++i) form[i] = Complex(0.0, k) * lap[i];
  } else {
    const double a = -c.mass * p.d1 / c.hbar;
    const double c1 = 2.0 * c.mass * p.b1 / a;
    const double c2 = 2.0 * c.mass * p.b6 / a;
    const HydroView h = hydro_decompose(psi, options);
    const auto grad_lap = h.phase.laplacian().gradient();
    std::vector<RealField> A;
    for (const Jet& j : grad_lap) {
      RealField f(g);
      auto val = j.value();
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = h.masked(i) ? 0.0 : a * val[i];
      A.push_back(std::move(f));
    }
    const RealField divA = divergence(A);
    // (∇ − iA)²Ψ = ΔΨ − i∇·(AΨ) − iA·∇Ψ − A²Ψ
    ComplexField cov = laplacian(psi);
    ComplexField a_dot_grad(g);
    RealField a2(g);
    for (int ax = 0; ax < g.dims(); ++ax) {
      ComplexField apsi(g);
      for (std::size_t i = 0; i < g.size(); ++i) apsi[i] = A[ax][i] * psi[i];
      const ComplexField d_apsi = spectral_derivative(apsi, 1, ax);
      const ComplexField d_psi = spectral_derivative(psi, 1, ax);
      for (std::size_t i = 0; i < g.size(); ++i) {
        cov[i] -= Complex(0.0, 1.0) * d_apsi[i];
        a_dot_grad[i] += A[ax][i] * d_psi[i];
        a2[i] += A[ax][i] * A[ax][i];
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      cov[i] -= Complex(0.0, 1.0) * a_dot_grad[i] + a2[i] * psi[i];
      const Complex ratio = h.masked(i) ? Complex{} : a_dot_grad[i] / psi[i];
      Complex rhs = -k * cov[i] - k * a2[i] * psi[i] + c1 * k * divA[i] * psi[i] +
                    k * (c2 * ratio.real() + 2.0 * ratio.imag()) * psi[i];
      form[i] = Complex(0.0, -1.0) * rhs;
      c2_term[i] = Complex(0.0, -1.0) * k * c2 * ratio.real() * psi[i];
    }
  }

  ComplexField r = reference - form;
  rep.max_deviation = max_abs(r);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    num += (std::conj(c2_term[i]) * r[i]).real();
    den += std::norm(c2_term[i]);
  }
  const double extra = den > 0.0 ? num / den : 0.0;
  rep.c2_factor = 1.0 + extra;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= extra * c2_term[i];
  rep.max_deviation_after_fit = max_abs(r);
  return rep;
}

}  // namespace hnls
