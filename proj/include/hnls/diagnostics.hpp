#pragma once

#include <array>
#include <vector>

#include "hnls/evolution.hpp"

namespace hnls {

struct EnergyPair {
  double linear = 0.0;  // E_L = ħ²/2m ∫|∇Ψ|² + ∫Vρ
  double total = 0.0;   // E_ME = E_L + ħ(b1 − b6) ∫ρΔΔS
};

EnergyPair energy(const ComplexField& psi, const RealField* potential, const MEParams& params,
                  const PhysicalConstants& constants = {}, const HydroOptions& options = {});

/// E_L plus ∫ρ Re(H_NL); equals the ME energy above for ME coefficient sets.
double energy_expectation(const ComplexField& psi, const RealField* potential, const CoeffSet& coeffs,
                          const PhysicalConstants& constants = {}, const HydroOptions& options = {});

double linear_energy(const ComplexField& psi, const RealField* potential,
                     const PhysicalConstants& constants = {});

std::array<double, 2> position_mean(const ComplexField& psi);
std::array<double, 2> momentum_mean(const ComplexField& psi, const PhysicalConstants& constants = {});
/// ⟨∇V⟩, evaluated as −∫V∇ρ so a non-periodic V is never differentiated.
std::array<double, 2> force_mean(const ComplexField& psi, const RealField& potential);

struct EhrenfestCorrections {
  std::array<double, 2> i1{};  // (2m/ħ) ∫ x ρ H_I
  std::array<double, 2> i2{};  // ∫ ρ (2 H_I ∇S − ∇H_R)
};

/// Requires decayed tails (the x-weighted integral is meaningless otherwise).
EhrenfestCorrections ehrenfest_corrections(const ComplexField& psi, const CoeffSet& coeffs,
                                           const PhysicalConstants& constants = {},
                                           const HydroOptions& options = {});
EhrenfestCorrections ehrenfest_corrections(const ComplexField& psi, const MEParams& params,
                                           const PhysicalConstants& constants = {},
                                           const HydroOptions& options = {});

struct EhrenfestReport {
  std::vector<double> times;                 // interior sample times
  std::vector<std::array<double, 2>> r1;     // m d⟨x⟩/dt − ⟨p⟩ − I1
  std::vector<std::array<double, 2>> r2;     // d⟨p⟩/dt + ⟨∇V⟩ − I2
  double max_r1 = 0.0;
  double max_r2 = 0.0;
  // same residuals with the corrections left out
  double max_r1_uncorrected = 0.0;
  double max_r2_uncorrected = 0.0;
  double max_i1 = 0.0;
  double max_i2 = 0.0;
};

/// Centred differences over trajectory snapshots (snapshots must be kept).
EhrenfestReport ehrenfest_consistency(const Trajectory& trajectory, const RealField* potential,
                                      const CoeffSet& coeffs, const PhysicalConstants& constants = {},
                                      const HydroOptions& options = {});

struct SeparabilityConfig {
  CoeffSet coeffs = CoeffSet::zero(Variant::EXT);
  double t_end = 0.0;
  double dt = 0.0;  // 0: half the 2D stability bound
  Integrator integrator = Integrator::IFRK4;
  std::size_t samples = 4;
  PhysicalConstants constants;
  HydroOptions hydro;
  double norm_drift_tolerance = 1e-6;
};

struct SeparabilityReport {
  std::vector<double> times;
  std::vector<double> deviations;  // max|Ψ_2D − Ψ1⊗Ψ2| at each time
  double max_deviation = 0.0;
  double dt = 0.0;
};

/// Evolves Ψ1⊗Ψ2 under V1 + V2 on the product grid and compares with the
/// product of the separate 1D evolutions. The product grid is limited to
/// 128² points.
SeparabilityReport separability_test(const ComplexField& psi1, const ComplexField& psi2,
                                     const RealField* v1, const RealField* v2,
                                     const SeparabilityConfig& config);

/// One observables row. `previous` (one step of length dt earlier) enables
/// the continuity residual; without it the residual is zero.
ObservablesSample sample_observables(double t, const ComplexField& psi, const ComplexField* previous,
                                     double dt, const RealField* potential, const CoeffSet& coeffs,
                                     const PhysicalConstants& constants = {},
                                     const HydroOptions& options = {});

}  // namespace hnls
