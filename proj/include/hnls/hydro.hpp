#pragma once

#include <cstdint>
#include <vector>

#include "hnls/field.hpp"
#include "hnls/jet.hpp"

namespace hnls {

struct HydroOptions {
  /// Density floor relative to max(rho); points below it are masked.
  double relative_floor = 1e-12;
  /// Decomposition fails when a larger fraction of the grid is masked.
  double max_masked_fraction = 0.25;
  /// Highest derivative order carried by the phase and log-density jets.
  int jet_order = 4;
};

/// Hydrodynamic view of a wave function Psi = sqrt(rho) exp(iS).
///
/// The phase is never unwrapped. Derivatives of S and of ln(rho) are
/// obtained from spectral derivatives of Psi through the pointwise identity
/// d(ln Psi) = dPsi/Psi and its higher-order recursion, so only Psi itself
/// is ever transformed. Masked points (rho below the floor) carry zero in
/// every derived field.
struct HydroView {
  RealField rho;
  std::vector<RealField> grad_phase;         // ∇S
  std::vector<RealField> grad_log_density;   // ∇ρ/ρ
  RealField lap_phase;                       // ΔS
  RealField lap_density_over_density;        // Δρ/ρ
  std::vector<std::uint8_t> node_mask;       // 1 where ρ < floor
  double density_floor = 0.0;
  std::size_t masked_count = 0;

  // Derivative jets of S and ln ρ; the order-0 slot is unused (zero).
  Jet phase;
  Jet log_density;

  const Grid& grid() const { return rho.grid(); }
  bool masked(std::size_t i) const { return node_mask[i] != 0; }
};

HydroView hydro_decompose(const ComplexField& psi, const HydroOptions& options = {});

/// Integral over unmasked points only.
double integrate_unmasked(const RealField& f, const HydroView& hydro);

}  // namespace hnls
