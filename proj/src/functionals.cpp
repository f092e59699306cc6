#include "hnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hnls {
namespace {

RealField value_field(const Jet& j, const Grid& g) {
  RealField f(g);
  auto v = j.value();
  std::copy(v.begin(), v.end(), f.data().begin());
  return f;
}

void require_jet_order(const HydroView& h, int order) {
  if (h.phase.order() < order) {
    throw InvalidArgument("hydrodynamic view carries derivatives up to order " +
                          std::to_string(h.phase.order()) + ", need " + std::to_string(order));
  }
}

std::vector<double> parse_args(const std::string& spec, const std::string& name, std::size_t count) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw InvalidArgument("preset '" + spec + "' needs arguments: " + name);
  }
  std::vector<double> args;
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad numeric argument in preset '" + spec + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidArgument("bad numeric argument in preset '" + spec + "'");
    }
    args.push_back(v);
  }
  if (args.size() != count) {
    throw InvalidArgument("preset " + name + " takes " + std::to_string(count) + " arguments");
  }
  return args;
}

}  // namespace

std::size_t term_count(Variant v) { return v == Variant::DG ? 5 : 13; }

std::string to_string(Variant v) { return v == Variant::DG ? "DG" : "EXT"; }

CoeffSet CoeffSet::zero(Variant v) {
  CoeffSet c;
  c.variant = v;
  c.a.assign(term_count(v), 0.0);
  c.b.assign(term_count(v), 0.0);
  return c;
}

void CoeffSet::validate() const {
  const std::size_t n = term_count(variant);
  if (a.size() != n || b.size() != n) {
    throw InvalidArgument(to_string(variant) + " coefficient arrays need " + std::to_string(n) +
                          " entries");
  }
  for (double v : a) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite coefficient");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite coefficient");
  }
  if (!std::isfinite(coupling) || !std::isfinite(forbidden)) {
    throw InvalidArgument("non-finite coupling");
  }
}

bool CoeffSet::is_linear() const {
  if (coupling == 0.0) return true;
  const auto zero = [](double v) { return v == 0.0; };
  return std::all_of(a.begin(), a.end(), zero) && std::all_of(b.begin(), b.end(), zero) &&
         forbidden == 0.0;
}

bool CoeffSet::is_divergence_form(double tol) const {
  const auto eq = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  if (variant == Variant::DG) {
    return eq(a[0], a[1]) && eq(a[3], 0.0) && eq(a[4], 0.0);
  }
  for (int i = 0; i < 5; ++i) {
    if (!eq(a[i], a[i + 5])) return false;
  }
  return eq(a[10], 0.0) && eq(a[11], 0.0) && eq(a[12], 0.0);
}

CoeffSet MEParams::expand() const {
  CoeffSet c = CoeffSet::zero(Variant::EXT);
  c.coupling = 1.0;
  c.a[0] = d1;
  c.a[5] = d1;
  c.b[0] = b1;
  c.b[5] = b6;
  return c;
}

std::vector<RealField> functional_terms(Variant v, const HydroView& h,
                                        const std::vector<bool>& needed) {
  const std::size_t n = term_count(v);
  const auto want = [&](std::size_t i) { return needed.empty() || needed.at(i); };
  const Grid& g = h.grid();
  std::vector<RealField> out(n, RealField(g));

  const auto grad_s = h.phase.gradient();        // order 3
  const auto grad_l = h.log_density.gradient();  // ∇ρ/ρ, order 3

  if (v == Variant::DG) {
    require_jet_order(h, 2);
    if (want(0)) out[0] = h.lap_phase;
    if (want(1)) out[1] = value_field(dot(grad_s, grad_l), g);
    if (want(2)) out[2] = h.lap_density_over_density;
    if (want(3)) out[3] = value_field(dot(grad_l, grad_l), g);
    if (want(4)) out[4] = value_field(dot(grad_s, grad_s), g);
    return out;
  }

  require_jet_order(h, 4);
  const Jet lap_s = h.phase.laplacian();                      // ΔS, order 2
  const Jet q2 = dot(grad_l, grad_l);                         // (∇ρ/ρ)², order 3
  const Jet p = h.log_density.laplacian() + q2;               // Δρ/ρ, order 2
  const Jet x = dot(grad_l, grad_s);                          // ∇ρ/ρ·∇S, order 3
  const Jet y = dot(grad_s, grad_s);                          // (∇S)², order 3

  const auto grad = [](const Jet& j) { return j.gradient(); };
  if (want(0)) out[0] = value_field(lap_s.laplacian(), g);
  if (want(1)) out[1] = value_field(p.laplacian(), g);
  if (want(2)) out[2] = value_field(q2.laplacian(), g);
  if (want(3)) out[3] = value_field(x.laplacian(), g);
  if (want(4)) out[4] = value_field(y.laplacian(), g);
  if (want(5)) out[5] = value_field(dot(grad_l, grad(lap_s)), g);
  if (want(6)) out[6] = value_field(dot(grad_l, grad(p)), g);
  if (want(7)) out[7] = value_field(dot(grad_l, grad(q2)), g);
  if (want(8)) out[8] = value_field(dot(grad_l, grad(x)), g);
  if (want(9)) out[9] = value_field(dot(grad_l, grad(y)), g);
  if (want(10)) out[10] = value_field(dot(grad_s, grad(lap_s)), g);
  if (want(11)) out[11] = value_field(dot(grad_s, grad(q2)), g);
  if (want(12)) out[12] = value_field(dot(grad_s, grad(p)), g);
  return out;
}

RealField eval_functional(const std::vector<double>& x, Variant v, const HydroView& hydro) {
  if (x.size() != term_count(v)) {
    throw InvalidArgument(to_string(v) + " functional needs " + std::to_string(term_count(v)) +
                          " coefficients, got " + std::to_string(x.size()));
  }
  std::vector<bool> needed(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) needed[i] = x[i] != 0.0;
  const auto terms = functional_terms(v, hydro, needed);
  RealField f(hydro.grid());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (needed[i]) f += x[i] * terms[i];
  }
  return f;
}

double homogeneity_check(Variant v, const std::vector<double>& x, const ComplexField& psi,
                         Complex lambda, const HydroOptions& options) {
  if (lambda == Complex(0.0)) throw InvalidArgument("homogeneity factor must be nonzero");
  ComplexField scaled = psi;
  scaled *= lambda;
  const HydroView h0 = hydro_decompose(psi, options);
  const HydroView h1 = hydro_decompose(scaled, options);
  const RealField f0 = eval_functional(x, v, h0);
  const RealField f1 = eval_functional(x, v, h1);
  double dev = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (h0.masked(i) || h1.masked(i)) continue;
    dev = std::max(dev, std::abs(f1[i] - f0[i]));
  }
  return dev;
}

CoeffSet dg_coeffs_from_gauge(double d1, double d2, const PhysicalConstants& c) {
  c.validate();
  // Expanding (∇ − iA)²Ψ with ∇Ψ/Ψ = ∇ρ/(2ρ) + i∇S gives
  //   imaginary: −(hbar/m)[d1(ΔS + ∇S·∇ρ/ρ) + d2 Δρ/ρ]            = D F_a
  //   real:      −(hbar/2m)[(2d1 − d1²)(∇S)² + 2d2(1 − d1)∇S·∇ρ/ρ
  //                          − d2²(∇ρ/ρ)²]                          = D F_b
  // with D = hbar/m.
  CoeffSet s = CoeffSet::zero(Variant::DG);
  s.coupling = c.hbar / c.mass;
  s.a = {-d1, -d1, -d2, 0.0, 0.0};
  s.b = {0.0, -d2 * (1.0 - d1), 0.0, 0.5 * d2 * d2, -0.5 * d1 * (2.0 - d1)};
  return s;
}

RealField forbidden_term(const HydroView& hydro, double x14) {
  RealField f(hydro.grid());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = x14 * hydro.lap_phase[i] * hydro.lap_phase[i];
  return f;
}

CoeffSet preset(const std::string& spec, const PhysicalConstants& constants) {
  const std::string name = spec.substr(0, spec.find('('));
  const bool has_args = spec.find('(') != std::string::npos;
  if (name == "linear" && !has_args) {
    CoeffSet c = CoeffSet::zero(Variant::EXT);
    c.coupling = 0.0;
    return c;
  }
  if (name == "dg" && !has_args) {
    CoeffSet c = CoeffSet::zero(Variant::DG);
    c.coupling = 0.05;
    c.a = {1.0, 1.0, 0.0, 0.0, 0.0};
    c.b = {-0.1, 0.0, 0.05, 0.0, 0.0};
    return c;
  }
  if (name == "dg-linearizable") {
    const auto args = parse_args(spec, "dg-linearizable(d1,d2)", 2);
    return dg_coeffs_from_gauge(args[0], args[1], constants);
  }
  if (name == "ext" && !has_args) {
    CoeffSet c = CoeffSet::zero(Variant::EXT);
    c.coupling = 1.0;
    c.a[0] = c.a[5] = 0.05;
    c.a[1] = c.a[6] = 0.02;
    c.a[2] = c.a[7] = 0.01;
    c.b[0] = 0.02;
    c.b[1] = 0.01;
    c.b[2] = 0.005;
    c.b[5] = 0.01;
    return c;
  }
  if (name == "me") {
    if (!has_args) return MEParams{0.1, 0.05, 0.02}.expand();
    const auto args = parse_args(spec, "me(D1,b1,b6)", 3);
    return MEParams{args[0], args[1], args[2]}.expand();
  }
  throw InvalidArgument("unknown coefficient preset '" + spec + "'");
}

}  // namespace hnls
