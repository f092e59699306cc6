#include "hnls/currents.hpp"

#include <cmath>

#include "hnls/spectral.hpp"

namespace hnls {
namespace {

std::vector<RealField> weighted_gradient(const HydroView& h, const std::vector<Jet>& grad, double c) {
  std::vector<RealField> out;
  for (const Jet& g : grad) {
    RealField f(h.grid());
    auto v = g.value();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = h.masked(i) ? 0.0 : c * h.rho[i] * v[i];
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<RealField> zero_vector(const Grid& g) {
  return std::vector<RealField>(static_cast<std::size_t>(g.dims()), RealField(g));
}

}  // namespace

std::vector<RealField> CurrentSet::total() const {
  std::vector<RealField> t = linear;
  for (const auto& j : extra) {
    for (std::size_t a = 0; a < t.size(); ++a) t[a] += j[a];
  }
  return t;
}

CurrentSet currents(const HydroView& h, const CoeffSet& coeffs, const PhysicalConstants& c) {
  coeffs.validate();
  c.validate();
  if (!coeffs.is_divergence_form(1e-14)) {
    throw InvalidArgument("currents are defined for divergence-form coefficient sets only");
  }
  const Grid& g = h.grid();
  CurrentSet out;
  out.linear = weighted_gradient(h, h.phase.gradient(), c.hbar / c.mass);
  for (auto& j : out.extra) j = zero_vector(g);

  const double d = coeffs.coupling;
  if (coeffs.variant == Variant::DG) {
    out.couplings = {d * coeffs.a[0], d * coeffs.a[2], 0.0, 0.0, 0.0};
    if (out.couplings[0] != 0.0) out.extra[0] = weighted_gradient(h, h.phase.gradient(), out.couplings[0]);
    if (out.couplings[1] != 0.0) {
      out.extra[1] = weighted_gradient(h, h.log_density.gradient(), out.couplings[1]);
    }
    return out;
  }

  for (int i = 0; i < 5; ++i) out.couplings[i] = d * coeffs.a[i];
  const auto grad_s = h.phase.gradient();
  const auto grad_l = h.log_density.gradient();
  const auto field = [&](int i) -> Jet {
    switch (i) {
      case 0: return h.phase.laplacian();
      case 1: return h.log_density.laplacian() + dot(grad_l, grad_l);
      case 2: return dot(grad_l, grad_l);
      case 3: return dot(grad_l, grad_s);
      default: return dot(grad_s, grad_s);
    }
  };
  for (int i = 0; i < 5; ++i) {
    if (out.couplings[i] == 0.0) continue;
    out.extra[i] = weighted_gradient(h, field(i).gradient(), out.couplings[i]);
  }
  return out;
}

ContinuityResidual continuity_residual(const ComplexField& psi0, const ComplexField& psi1, double dt,
                                       const CoeffSet& coeffs, const PhysicalConstants& constants,
                                       const HydroOptions& options, const ComplexField* midpoint) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (psi0.grid() != psi1.grid()) throw InvalidArgument("snapshots live on different grids");
  const Grid& g = psi0.grid();
  const HydroView h0 = hydro_decompose(psi0, options);
  const HydroView h1 = hydro_decompose(psi1, options);
  const auto j0 = currents(h0, coeffs, constants).total();
  const auto j1 = currents(h1, coeffs, constants).total();
  std::vector<RealField> mid;
  for (std::size_t a = 0; a < j0.size(); ++a) mid.push_back(0.5 * (j0[a] + j1[a]));
  if (midpoint) {
    if (midpoint->grid() != g) throw InvalidArgument("snapshots live on different grids");
    const auto jm = currents(hydro_decompose(*midpoint, options), coeffs, constants).total();
    for (std::size_t a = 0; a < mid.size(); ++a) mid[a] = (1.0 / 3.0) * mid[a] + (2.0 / 3.0) * jm[a];
  }

  ContinuityResidual r{RealField(g), RealField(g), divergence(mid)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    r.drho_dt[i] = (h1.rho[i] - h0.rho[i]) / dt;
    r.residual[i] = r.drho_dt[i] + r.div_current[i];
  }
  r.max_abs = max_abs(r.residual);
  r.integral = integrate(r.residual);
  RealField abs_r = r.residual;
  for (double& v : abs_r.data()) v = std::abs(v);
  r.l1 = integrate(abs_r);
  r.max_drho_dt = max_abs(r.drho_dt);
  r.max_div_current = max_abs(r.div_current);
  return r;
}

EffectiveMass effective_mass(double mass, double coupling, double hbar) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw InvalidArgument("mass and hbar must be positive");
  const double beta = 1.0 + coupling * mass / hbar;
  if (std::abs(beta) < 1e-14) throw NumericalError("effective mass is singular (beta = 0)");
  return {mass / beta, beta};
}

}  // namespace hnls
