#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hnls/field.hpp"

namespace hnls {

enum class StateKind { PlaneWave, GaussianPacket, HarmonicEigenstate, Coherent, Random };

StateKind parse_state_kind(const std::string& name);
std::string to_string(StateKind kind);

struct StateParams {
  // plane_wave: wave vector, must be an integer multiple of 2π/L per axis
  std::array<double, 2> k{0.0, 0.0};

  // gaussian_packet: free packet at time t with time scale t0 (width
  // sigma^2 = hbar t0 / m), centred at x0 + p0 t / m, mean momentum p0
  double t = 0.0;
  double t0 = 1.0;
  std::array<double, 2> x0{0.0, 0.0};
  std::array<double, 2> p0{0.0, 0.0};

  // harmonic_eigenstate / coherent: oscillator frequency and levels
  double omega = 1.0;
  std::array<int, 2> level{0, 0};

  // random: band-limited perturbation (1 + xi) with |modes| <= cutoff
  std::uint64_t seed = 0;
  std::size_t cutoff = 0;  // 0 selects n/8
  double amplitude = 0.5;
};

/// Reference states. All kinds except plane_wave are normalised to unit
/// norm; plane waves have unit density. Localised kinds must decay below
/// 1e-14 (relative density) at the box edge.
ComplexField make_state(StateKind kind, const StateParams& params, const Grid& grid,
                        const PhysicalConstants& constants = {});

/// Largest density on the box boundary relative to the peak density.
double edge_density_ratio(const ComplexField& psi);
void require_decayed_tails(const ComplexField& psi, double threshold = 1e-14);

/// Psi1(x) Psi2(y) on the 2D product of two 1D grids.
ComplexField tensor_product(const ComplexField& psi1, const ComplexField& psi2);
/// V1(x) + V2(y) on the 2D product grid.
RealField additive_potential(const RealField& v1, const RealField& v2);

/// V = m omega^2 |x|^2 / 2 in centred coordinates.
RealField harmonic_potential(const Grid& grid, double omega, const PhysicalConstants& constants = {});

struct Eigenpairs {
  std::vector<double> energies;
  std::vector<ComplexField> states;
};

/// Lowest eigenpairs of the Fourier-collocation Hamiltonian
/// -hbar^2/(2m) d^2/dx^2 + V on a 1D grid (dense symmetric eigensolve).
Eigenpairs linear_eigenstates(const RealField& potential, std::size_t count,
                              const PhysicalConstants& constants = {});

}  // namespace hnls
