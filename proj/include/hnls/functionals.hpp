#pragma once

#include <string>
#include <vector>

#include "hnls/hydro.hpp"

namespace hnls {

enum class Variant { DG, EXT };

std::size_t term_count(Variant v);
std::string to_string(Variant v);

/// Coefficients {a}, {b} of the homogeneous functionals plus coupling D.
///
/// Index i (0-based) multiplies term i+1 in the order documented in
/// docs/coefficients.md:
///
///   DG : ΔS, ∇S·∇ρ/ρ, Δρ/ρ, (∇ρ/ρ)², (∇S)²
///   EXT: ΔΔS, Δ(Δρ/ρ), Δ(∇ρ/ρ)², Δ(∇ρ/ρ·∇S), Δ(∇S)²,
///        ∇ρ/ρ·∇ΔS, ∇ρ/ρ·∇(Δρ/ρ), ∇ρ/ρ·∇(∇ρ/ρ)², ∇ρ/ρ·∇(∇ρ/ρ·∇S),
///        ∇ρ/ρ·∇(∇S)², ∇S·∇ΔS, ∇S·∇(∇ρ/ρ)², ∇S·∇(Δρ/ρ)
///
/// `forbidden` multiplies (ΔS)² in the real part. It breaks weak
/// separability and exists only for the separability demonstration.
struct CoeffSet {
  Variant variant = Variant::DG;
  std::vector<double> a;
  std::vector<double> b;
  double coupling = 1.0;
  double forbidden = 0.0;

  static CoeffSet zero(Variant v);
  void validate() const;
  bool is_linear() const;
  /// True when ρF_{a} is a total divergence: DG with a1 = a2, a4 = a5 = 0;
  /// EXT with a1..a5 = a6..a10 and a11 = a12 = a13 = 0.
  bool is_divergence_form(double tol = 0.0) const;
};

/// Minimal-extension parameters. Expands to an EXT set with D = 1,
/// a1 = a6 = D1, b1, b6 as given, everything else zero.
struct MEParams {
  double d1 = 0.0;
  double b1 = 0.0;
  double b6 = 0.0;

  CoeffSet expand() const;
};

/// Pointwise value of each functional term (5 for DG, 13 for EXT).
/// `needed` selects terms; unselected entries are left empty.
std::vector<RealField> functional_terms(Variant v, const HydroView& hydro,
                                        const std::vector<bool>& needed = {});

/// Σ x_i F_i for one coefficient half.
RealField eval_functional(const std::vector<double>& x, Variant v, const HydroView& hydro);

/// max |F[λΨ] − F[Ψ]| over points unmasked for both states.
double homogeneity_check(Variant v, const std::vector<double>& x, const ComplexField& psi,
                         Complex lambda, const HydroOptions& options = {});

/// Coefficients of the linearisable DG variant obtained by expanding
/// -hbar^2/(2m) (∇ − iA)² Ψ with A = d1 ∇S + d2 ∇ρ/ρ. The coupling is
/// D = hbar/m.
CoeffSet dg_coeffs_from_gauge(double d1, double d2, const PhysicalConstants& constants = {});

/// x14 (ΔS)².
RealField forbidden_term(const HydroView& hydro, double x14);

/// Named presets: "linear", "dg", "dg-linearizable(d1,d2)", "ext",
/// "me(D1,b1,b6)".
CoeffSet preset(const std::string& spec, const PhysicalConstants& constants = {});

}  // namespace hnls
