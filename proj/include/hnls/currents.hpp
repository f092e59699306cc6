#pragma once

#include <array>
#include <vector>

#include "hnls/functionals.hpp"

namespace hnls {

/// Probability current and the extra currents of a divergence-form
/// coefficient set.
///
/// EXT: j_i = D_i ρ ∇f_i with D_i = a_i D and
///   f_1 = ΔS, f_2 = Δρ/ρ, f_3 = (∇ρ/ρ)², f_4 = ∇ρ/ρ·∇S, f_5 = (∇S)².
/// DG:  j_1 = D a_1 ρ∇S (mass renormalisation), j_2 = D a_3 ∇ρ (diffusion),
///      j_3..j_5 = 0.
struct CurrentSet {
  std::vector<RealField> linear;                 // ħρ∇S/m
  std::array<std::vector<RealField>, 5> extra;   // j_1 .. j_5
  std::array<double, 5> couplings{};             // D_1 .. D_5

  std::vector<RealField> total() const;
};

CurrentSet currents(const HydroView& hydro, const CoeffSet& coeffs,
                    const PhysicalConstants& constants = {});

/// Pointwise continuity residual ∂ρ/∂t + ∇·J between two snapshots dt
/// apart. ∂ρ/∂t is the forward difference (centred at the midpoint) and J
/// is the average of the currents at both ends, so the residual is O(dt²).
/// With a midpoint snapshot the current is Simpson-averaged instead and the
/// residual drops to O(dt⁴).
struct ContinuityResidual {
  RealField residual;
  RealField drho_dt;
  RealField div_current;
  double max_abs = 0.0;
  double integral = 0.0;     // ∫ residual dV
  double l1 = 0.0;           // ∫ |residual| dV
  double max_drho_dt = 0.0;
  double max_div_current = 0.0;
};

ContinuityResidual continuity_residual(const ComplexField& psi0, const ComplexField& psi1, double dt,
                                       const CoeffSet& coeffs, const PhysicalConstants& constants = {},
                                       const HydroOptions& options = {},
                                       const ComplexField* midpoint = nullptr);

struct EffectiveMass {
  double mass;  // m* = m / beta
  double beta;  // 1 + D m / hbar
};

EffectiveMass effective_mass(double mass, double coupling, double hbar);

}  // namespace hnls
