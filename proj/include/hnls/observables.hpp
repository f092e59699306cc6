#pragma once

#include <array>

namespace hnls {

/// One row of the observables table.
struct ObservablesSample {
  double t = 0.0;
  double norm = 0.0;
  double energy_linear = 0.0;     // E_L
  double energy_total = 0.0;      // E_ME = Re <Ψ|H|Ψ>
  std::array<double, 2> x_mean{};
  std::array<double, 2> p_mean{};
  std::array<double, 2> i1{};
  std::array<double, 2> i2{};
  double continuity_residual = 0.0;  // ∫|∂ρ/∂t + ∇·J| dV over the last step
};

}  // namespace hnls
