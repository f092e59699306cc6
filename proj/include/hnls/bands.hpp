#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "hnls/functionals.hpp"

namespace hnls {

/// S'(x) = A cos(√ω x + φ) + C, the harmonic phase gradient that makes the
/// stationary flux bracket ∇ΔS + ω∇S vanish when C = 0.
struct PhaseMode {
  double amplitude = 0.0;
  double omega = 1.0;
  double offset = 0.0;
  double drift = 0.0;

  /// ω = ħ/(D1 m); D1 must be nonzero.
  static PhaseMode from(const MEParams& params, double amplitude, const PhysicalConstants& constants = {});

  double wavenumber() const;
  double period() const;  // 2π/√ω
  RealField gradient(const Grid& grid) const;
  /// S(x) = (A/√ω) sin(√ω x + φ) + C x
  RealField phase(const Grid& grid) const;
};

/// max |∇·[ρ(∇ΔS + ω∇S)]| for a 1D density and phase gradient S'.
double stationary_flux_residual(const RealField& rho, const RealField& phase_gradient, const MEParams& params,
                                const PhysicalConstants& constants = {});

struct HillHarmonic {
  int k = 1;
  double q = 0.0;
  double phase = 0.0;
};

struct HillProvenance {
  double amplitude = 0.0;
  double energy = 0.0;
  MEParams params;
  double x_scale = 1.0;  // z = x_scale · x
};

/// y'' + Q(z) y = 0 with Q(z) = q0 + Σ 2 q_k cos(k z + φ_k).
struct HillEquation {
  double q0 = 0.0;
  std::vector<HillHarmonic> harmonics;
  std::optional<HillProvenance> provenance;

  static HillEquation constant(double a);
  /// y'' + (a − 2q cos 2z) y = 0
  static HillEquation mathieu(double a, double q);

  void validate() const;
  double operator()(double z) const;
  /// Q with q0 replaced by the spectral parameter a.
  double at(double z, double a) const;
  /// 2π / gcd of the listed harmonic orders.
  double period() const;
  bool pure_mathieu() const;
  /// Shift s with Q(z + s) even in z, if one exists.
  std::optional<double> symmetry_shift() const;
};

/// Substitutes S' = A cos(√ω x) into the stationary density equation with
/// V = 0, ħ∂S/∂t = −E, and rescales z = √ω x. Requires D1 > 0, b6 = 0.
HillEquation hill_from_stationary(const MEParams& params, double amplitude, double energy,
                                  const PhysicalConstants& constants = {});

struct FloquetOptions {
  double relative_tolerance = 1e-12;
  std::size_t initial_steps = 64;
  std::size_t max_steps = 1u << 18;
  double edge_tolerance = 1e-12;
};

struct FloquetSample {
  double parameter = 0.0;
  double trace = 0.0;
  double determinant = 0.0;
  // |m00 m11| + |m01 m10|; deep in a gap det loses digits in proportion
  double det_scale = 1.0;
  std::complex<double> nu;
  bool stable = false;
  std::size_t steps = 0;
  double error_estimate = 0.0;
};

/// |det M - 1| relative to the Wronskian products, the part not lost to roundoff.
double det_drift(const FloquetSample& s);

enum class EdgeKind { Periodic, Antiperiodic };

struct BandEdge {
  double parameter = 0.0;
  EdgeKind kind = EdgeKind::Periodic;
};

struct FloquetResult {
  std::vector<FloquetSample> samples;
  std::vector<BandEdge> edges;
  double tolerance = 0.0;
};

FloquetSample floquet_at(const HillEquation& hill, double a, const FloquetOptions& options = {});

/// Samples evenly over [a_min, a_max] and bisects every band edge inside.
FloquetResult floquet_analyze(const HillEquation& hill, double a_min, double a_max, std::size_t samples,
                              const FloquetOptions& options = {});

/// Lowest edge in [a_min, a_max], or nothing.
std::optional<double> lowest_band_edge(const HillEquation& hill, double a_min, double a_max,
                                       std::size_t samples = 64, const FloquetOptions& options = {});

/// Even (parity +1) or odd (-1) solution about the symmetry point of Q,
/// normalised to y = 1 or y' = 1 there, sampled at the given z.
std::vector<double> hill_solution(const HillEquation& hill, double a, int parity, const std::vector<double>& z,
                                  double max_step = 1e-2);

}  // namespace hnls
