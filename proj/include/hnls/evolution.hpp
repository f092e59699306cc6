#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hnls/functionals.hpp"
#include "hnls/observables.hpp"

namespace hnls {

enum class Integrator { IFRK4, RK4 };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

struct EvolutionConfig {
  double dt = 0.0;  // 0 selects default_time_step
  double t_end = 0.0;
  Integrator integrator = Integrator::IFRK4;
  std::size_t stride = 1;
  std::optional<RealField> potential;
  CoeffSet coeffs = CoeffSet::zero(Variant::EXT);
  PhysicalConstants constants;
  double norm_drift_tolerance = 1e-6;
  HydroOptions hydro;
  bool record_observables = true;
  bool keep_snapshots = true;
};

/// Explicit-stage stability estimate: C / (stiffest rate), C = 2.5, where
/// the rate collects max|V|/hbar, |D| Σ|coefficients| k_max^p (p = 4 for
/// EXT, 2 for DG) and, for plain RK4 only, hbar k_max^2 / 2m.
double stable_time_step(const Grid& grid, const EvolutionConfig& config);
/// Half the stability bound, capped at t_end.
double default_time_step(const Grid& grid, const EvolutionConfig& config);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<ObservablesSample> observables;
  double dt = 0.0;
};

/// Real and imaginary parts of the nonlinear Hamiltonian,
///   H_NL = ħD F_{b} + ħD x14 (ΔS)² − i (ħD/2) F_{a}.
struct NonlinearPotential {
  RealField real;
  RealField imag;
};

NonlinearPotential nonlinear_potential(const HydroView& hydro, const CoeffSet& coeffs,
                                       const PhysicalConstants& constants);

/// H_NL Ψ / (iħ): the nonlinear contribution to ∂Ψ/∂t.
ComplexField nonlinear_part(const ComplexField& psi, const CoeffSet& coeffs,
                            const PhysicalConstants& constants = {}, const HydroOptions& options = {});

/// Full right-hand side ∂Ψ/∂t = (iħ)⁻¹[(−ħ²Δ/2m + V)Ψ + H_NL Ψ].
ComplexField nonlinear_rhs(const ComplexField& psi, const RealField* potential, const CoeffSet& coeffs,
                           const PhysicalConstants& constants = {}, const HydroOptions& options = {});

Trajectory evolve(const ComplexField& psi0, const EvolutionConfig& config);

/// Ψ'(x) = Ψ(x − vt) exp(i[m* v·x − m* v² t / 2]/ħ) with m* = m/beta.
/// The boost momentum must be commensurate with the periodic box.
ComplexField galilean_boost(const ComplexField& psi, std::array<double, 2> velocity, double t,
                            const PhysicalConstants& constants = {}, double beta = 1.0);

struct GaugeFormReport {
  double max_deviation = 0.0;
  /// Least-squares factor on the c2 term that best reconciles both forms.
  double c2_factor = 1.0;
  double max_deviation_after_fit = 0.0;
  double nonlinear_scale = 0.0;
};

/// Compares ∂Ψ/∂t from the vector-potential form (A = a∇ΔS,
/// a = −mD1/ħ, c1 = 2mb1/a, c2 = 2mb6/a) with the minimal-extension
/// right-hand side. Re/Im(A·∇Ψ) are taken as Re/Im(A·∇Ψ/Ψ)·Ψ.
GaugeFormReport gauge_form_residual(const ComplexField& psi, const MEParams& params,
                                    const PhysicalConstants& constants = {},
                                    const HydroOptions& options = {});

}  // namespace hnls
