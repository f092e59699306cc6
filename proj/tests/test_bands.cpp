#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "hnls/bands.hpp"
#include "hnls/evolution.hpp"
#include "hnls/spectral.hpp"
#include "support.hpp"

using namespace hnls;
using test::pi;

namespace {

// regression constant, pinned by the monodromy run and the Fourier matrix below
constexpr double kA0AtQ1 = -0.4551386041;

// even pi-periodic Mathieu functions: cos(2rz) basis, lowest eigenvalue is a0(q)
double a0_fourier(double q, int modes = 40) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(modes, modes);
  for (int r = 0; r < modes; ++r) {
    m(r, r) = 4.0 * r * r;
    if (r + 1 < modes) m(r, r + 1) = m(r + 1, r) = q;
  }
  m(0, 1) = m(1, 0) = std::sqrt(2.0) * q;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0);
}

std::vector<double> edges_near(const FloquetResult& r, double centre, double width) {
  std::vector<double> out;
  for (const auto& e : r.edges) {
    if (std::abs(e.parameter - centre) <= width) out.push_back(e.parameter);
  }
  return out;
}

// psi = R e^{iS} with S' = A cos(√ω x) and R the even Hill solution at the
// lowest (periodic, nodeless) edge; k1_scale rescales the b1 harmonic
ComplexField bloch_state(const Grid& g, const MEParams& p, double amplitude, double k1_scale) {
  const PhaseMode mode = PhaseMode::from(p, amplitude);
  HillEquation h = hill_from_stationary(p, amplitude, 0.0);
  for (auto& hk : h.harmonics) {
    if (hk.k == 1) hk.q *= k1_scale;
  }
  const double a = *lowest_band_edge(h, -1.0, 0.5);
  std::vector<double> z(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) z[i] = mode.wavenumber() * g.coord(0, i);
  const auto r = hill_solution(h, a, 1, z, 1e-3);
  const RealField s = mode.phase(g);
  ComplexField psi(g);
  for (std::size_t i = 0; i < g.size(); ++i) psi[i] = std::polar(r[i], s[i]);
  return psi;
}

double density_drift(const ComplexField& psi0, const CoeffSet& c, double t) {
  EvolutionConfig cfg;
  cfg.coeffs = c;
  cfg.t_end = t;
  cfg.stride = 1u << 30;
  cfg.record_observables = false;
  const Trajectory tr = evolve(psi0, cfg);
  return max_abs_difference(density(tr.snapshots.back()), density(psi0));
}

}  // namespace

TEST_CASE("constant Q") {
  const HillEquation h = HillEquation::constant(0.2);
  const FloquetSample s = floquet_at(h, 0.2);
  CHECK(s.stable);
  CHECK(s.nu.real() == doctest::Approx(std::sqrt(0.2)).epsilon(1e-10));
  CHECK(std::abs(s.nu.imag()) <= 1e-12);
  CHECK(s.trace == doctest::Approx(2 * std::cos(2 * pi * std::sqrt(0.2))).epsilon(1e-10));

  const FloquetSample u = floquet_at(h, -0.5);
  CHECK_FALSE(u.stable);
  CHECK(u.nu.imag() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(floquet_at(h, 0.0).stable);
}

TEST_CASE("Mathieu q = 0 edges sit at n^2") {
  const HillEquation h = HillEquation::mathieu(0.0, 0.0);
  CHECK(h.period() == doctest::Approx(pi));
  CHECK(h.pure_mathieu());
  const FloquetResult r = floquet_analyze(h, -0.5, 9.7, 51);
  REQUIRE(r.edges.size() == 4);
  for (int n = 0; n <= 3; ++n) {
    CAPTURE(n);
    CHECK(std::abs(r.edges[static_cast<std::size_t>(n)].parameter - n * n) <= 1e-8);
    CHECK(r.edges[static_cast<std::size_t>(n)].kind == (n % 2 ? EdgeKind::Antiperiodic : EdgeKind::Periodic));
  }
}

TEST_CASE("determinant stays at one across a chart") {
  const FloquetResult r = floquet_analyze(HillEquation::mathieu(0.0, 1.0), -2.0, 20.0, 200);
  REQUIRE(r.samples.size() == 200);
  double worst = 0;
  for (const auto& s : r.samples) worst = std::max(worst, std::abs(s.determinant - 1.0));
  CHECK(worst <= 1e-10);
  for (const auto& s : r.samples) {
    CHECK(s.stable == (std::abs(s.trace) <= 2.0));
  }
}

TEST_CASE("a0(1) from the monodromy") {
  const HillEquation h = HillEquation::mathieu(0.0, 1.0);
  const auto a0 = lowest_band_edge(h, -2.0, 0.5);
  REQUIRE(a0.has_value());
  CHECK(std::abs(*a0 - kA0AtQ1) <= 1e-8);
  CHECK(std::abs(a0_fourier(1.0) - kA0AtQ1) <= 1e-9);

  // halve the starting step; the accepted answer must not move
  FloquetOptions fine;
  fine.initial_steps = 2 * FloquetOptions{}.initial_steps;
  const auto a0_fine = lowest_band_edge(h, -2.0, 0.5, 64, fine);
  REQUIRE(a0_fine.has_value());
  CHECK(std::abs(*a0 - *a0_fine) <= 1e-6);

  // below a0 every solution grows
  CHECK_FALSE(floquet_at(h, *a0 - 0.05).stable);
  CHECK(floquet_at(h, *a0 + 0.05).stable);
}

TEST_CASE("Hill equations without a symmetry point") {
  HillEquation h{1.3, {{1, 0.2, 0.3}, {2, -0.15, 1.1}}, std::nullopt};
  CHECK_FALSE(h.symmetry_shift().has_value());
  CHECK(h.period() == doctest::Approx(2 * pi));
  const FloquetResult r = floquet_analyze(h, -1.0, 3.0, 40);
  for (const auto& s : r.samples) CHECK(std::abs(s.determinant - 1.0) <= 1e-10);
  // edges found by trace bisection must satisfy |trM| = 2
  for (const auto& e : r.edges) {
    CHECK(std::abs(std::abs(floquet_at(h, e.parameter).trace) - 2.0) <= 1e-6);
  }
  // shifting z must not change the trace
  HillEquation moved = h;
  for (auto& hk : moved.harmonics) hk.phase += hk.k * 0.7;
  CHECK(floquet_at(moved, 0.4).trace == doctest::Approx(floquet_at(h, 0.4).trace).epsilon(1e-9));
}

TEST_CASE("symmetric and general paths agree") {
  // symmetric about s = pi/4 after the shift; compare with the full period trace
  const HillEquation h{0.8, {{1, 0.3, -pi / 4 + pi / 2}, {2, -0.4, -pi / 2 + pi}}, std::nullopt};
  REQUIRE(h.symmetry_shift().has_value());
  const double s = *h.symmetry_shift();
  CHECK(h(s + 0.37) == doctest::Approx(h(s - 0.37)).epsilon(1e-12));
  HillEquation broken = h;
  broken.harmonics.push_back({3, 1e-300, 0.123});  // too small to matter, kills the symmetry
  REQUIRE_FALSE(broken.symmetry_shift().has_value());
  for (double a : {-0.3, 0.6, 2.1}) {
    CAPTURE(a);
    CHECK(floquet_at(h, a).trace == doctest::Approx(floquet_at(broken, a).trace).epsilon(1e-9));
  }
}

TEST_CASE("Hill mapping from the stationary equation") {
  const PhysicalConstants c;
  SUBCASE("pointwise against the stationary density equation") {
    for (double b1 : {0.0, 0.05}) {
      CAPTURE(b1);
      const MEParams p{0.1, b1, 0.0};
      const double A = 1.3, E = 0.7;
      const HillEquation h = hill_from_stationary(p, A, E, c);
      CHECK(h.pure_mathieu() == (b1 == 0.0));
      const PhaseMode mode = PhaseMode::from(p, A, c);
      const Grid g = Grid::make(1, 64, 3 * mode.period());
      const RealField sp = mode.gradient(g);
      const RealField s4 = spectral_derivative(sp, 3, 0);
      double worst = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        // R'' + (2m/ħ²)[E - (ħ²/2m) S'² - ħ b1 S''''] R = 0, over ω for z
        const double qx = 2 * c.mass / (c.hbar * c.hbar) *
                          (E - c.hbar * c.hbar / (2 * c.mass) * sp[i] * sp[i] - c.hbar * b1 * s4[i]);
        worst = std::max(worst, std::abs(h(mode.wavenumber() * g.coord(0, i)) - qx / mode.omega));
      }
      CHECK(worst <= 1e-10);
      bool k1 = false, k2 = false;
      for (const auto& hk : h.harmonics) {
        k1 = k1 || (hk.k == 1 && hk.q != 0.0);
        k2 = k2 || (hk.k == 2 && hk.q != 0.0);
      }
      CHECK(k2);
      CHECK(k1 == (b1 != 0.0));
    }
  }
  SUBCASE("no modulation gives free dispersion") {
    const MEParams p{0.1, 0.05, 0.0};
    const HillEquation h = hill_from_stationary(p, 0.0, 0.7, c);
    CHECK(h.harmonics.empty());
    CHECK(h.q0 * (c.hbar / (p.d1 * c.mass)) == doctest::Approx(2 * c.mass * 0.7 / (c.hbar * c.hbar)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(hill_from_stationary({0.0, 0.05, 0.0}, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(hill_from_stationary({-0.1, 0.05, 0.0}, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(hill_from_stationary({0.1, 0.05, 0.02}, 1.0, 1.0), InvalidArgument);
  }
}

TEST_CASE("period law") {
  const MEParams p{0.1, 0.0, 0.0};
  const PhaseMode m = PhaseMode::from(p, 1.0);
  CHECK(std::abs(m.period() - 2 * pi / std::sqrt(10.0)) <= 1e-10);
  const PhaseMode doubled = PhaseMode::from({0.2, 0.0, 0.0}, 1.0);
  CHECK(doubled.omega == doctest::Approx(m.omega / 2).epsilon(1e-14));
  CHECK(std::abs(doubled.period() - std::sqrt(2.0) * m.period()) <= 1e-10);
  PhysicalConstants heavy;
  heavy.mass = 4.0;
  CHECK(PhaseMode::from(p, 1.0, heavy).omega == doctest::Approx(m.omega / 4));
  CHECK_THROWS_AS(PhaseMode::from({0.0, 0.0, 0.0}, 1.0), InvalidArgument);
}

TEST_CASE("stationary flux residual") {
  const MEParams p{0.1, 0.05, 0.0};
  const PhaseMode mode = PhaseMode::from(p, 0.8);
  const Grid g = Grid::make(1, 64, 2 * mode.period());
  SUBCASE("harmonic mode kills the bracket for any density") {
    // coarse grid: the bracket is ~1e-12 roundoff and d/dx of it scales with k_nyquist
    const Grid c = Grid::make(1, 16, 2 * mode.period());
    for (unsigned seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      const ComplexField f = test::random_state(c, seed);
      const double top = max_abs(f);
      RealField rho(c);
      for (std::size_t i = 0; i < c.size(); ++i) rho[i] = std::exp(f[i].real() / top);
      CHECK(stationary_flux_residual(rho, mode.gradient(c), p) <= 1e-12);
    }
  }
  SUBCASE("constant phase") {
    RealField rho = test::real_from_function(g, [](double x, double) { return std::exp(-x * x / 4); });
    CHECK(stationary_flux_residual(rho, RealField(g), p) == 0.0);
  }
  SUBCASE("off-resonant mode, analytic value") {
    const double k = 2 * pi * 4 / g.length(0), A = 0.6;
    RealField sp = test::real_from_function(g, [&](double x, double) { return A * std::cos(k * x); });
    const RealField one = test::real_from_function(g, [](double, double) { return 1.0; });
    // n = 64 and 4 turns put a grid point on every max of |sin|
    const double expect = A * k * std::abs(mode.omega - k * k);
    CHECK(stationary_flux_residual(one, sp, p) == doctest::Approx(expect).epsilon(1e-10));
  }
  SUBCASE("errors") {
    RealField rho(g);
    CHECK_THROWS_AS(stationary_flux_residual(rho, rho, {0.0, 0.0, 0.0}), InvalidArgument);
  }
}

TEST_CASE("edges leave n^2 linearly in q") {
  // Mathieu: a1 = 1 + q, b1 = 1 - q; a0 and the n = 2 pair move at order q^2
  for (double q : {1e-3, 2e-3}) {
    CAPTURE(q);
    const FloquetResult r = floquet_analyze(HillEquation::mathieu(0.0, q), -0.2, 4.5, 48);
    const auto one = edges_near(r, 1.0, 0.1);
    REQUIRE(one.size() == 2);
    CHECK(std::abs(one[0] - (1 - q)) <= q * q);
    CHECK(std::abs(one[1] - (1 + q)) <= q * q);
    for (double centre : {0.0, 4.0}) {
      for (double e : edges_near(r, centre, 0.1)) CHECK(std::abs(e - centre) <= q * q);
    }
  }
}

TEST_CASE("Hill solutions") {
  const HillEquation h = HillEquation::mathieu(0.0, 1.0);
  const std::vector<double> z{-2.0, -0.5, 0.0, 0.5, 2.0};
  const auto even = hill_solution(h, 0.3, 1, z);
  const auto odd = hill_solution(h, 0.3, -1, z);
  CHECK(even[2] == doctest::Approx(1.0));
  CHECK(odd[2] == doctest::Approx(0.0));
  CHECK(even[0] == doctest::Approx(even[4]).epsilon(1e-10));
  CHECK(odd[1] == doctest::Approx(-odd[3]).epsilon(1e-10));
  // at the lowest edge the even solution is periodic and nodeless
  const double a0 = *lowest_band_edge(h, -2.0, 0.5);
  const auto ce0 = hill_solution(h, a0, 1, {0.1, 0.1 + pi, 1.0, 1.0 + pi});
  CHECK(ce0[0] == doctest::Approx(ce0[1]).epsilon(1e-7));
  CHECK(ce0[2] == doctest::Approx(ce0[3]).epsilon(1e-7));
  CHECK_THROWS_AS(hill_solution(h, 0.3, 0, z), InvalidArgument);
}

TEST_CASE("input validation") {
  const HillEquation h = HillEquation::mathieu(0.0, 1.0);
  CHECK_THROWS_AS(floquet_analyze(h, 1.0, 0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(floquet_analyze(h, 0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(floquet_at(h, std::nan("")), InvalidArgument);
  HillEquation bad{0.0, {{0, 1.0, 0.0}}, std::nullopt};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  FloquetOptions tight;
  tight.max_steps = 64;
  CHECK_THROWS_AS(floquet_at(h, 0.3, tight), NumericalError);
}

TEST_CASE("Bloch-like state stays put under ME evolution") {
  // 8 points per period keeps k_nyquist^2 near 16 omega; the k^2 > omega
  // modes grow at roughly 70 per unit time from aliasing at the 1e-9 level,
  // so the modulation stays small
  const MEParams p{0.1, 0.05, 0.0};
  const double A = 0.05;
  const Grid g = Grid::make(1, 16, 2 * PhaseMode::from(p, A).period());
  const double good = density_drift(bloch_state(g, p, A, 1.0), p.expand(), 0.2);
  const double half = density_drift(bloch_state(g, p, A, 0.5), p.expand(), 0.2);
  CHECK(good <= 1e-4);
  CHECK(half >= 10 * good);
}

TEST_CASE("deep gaps keep det within roundoff of the Wronskian") {
  const HillEquation h = hill_from_stationary({0.1, 0.05, 0.0}, 0.8, 0.0);
  const FloquetSample s = floquet_at(h, -5.0);
  CHECK(std::abs(s.trace) > 1e5);
  CHECK(s.det_scale > 1e5);
  CHECK(det_drift(s) <= 1e-10);
  CHECK_FALSE(s.stable);
}
