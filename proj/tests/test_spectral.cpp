#include <doctest.h>

#include <complex>

#include "hnls/hydro.hpp"
#include "hnls/spectral.hpp"
#include "support.hpp"

using namespace hnls;
using test::pi;

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(Grid::make(1, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::make(1, 48, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::make(1, 64, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::make(3, 64, 1.0), InvalidArgument);

  const Grid g = Grid::make(1, 256, 2 * pi);
  CHECK(g.dx(0) == doctest::Approx(2 * pi / 256).epsilon(1e-15));
  CHECK(g.dx(0) * 256 == 2 * pi);

  const Grid g2 = Grid::make(2, 64, 20.0);
  CHECK(g2.size() == 4096);
  CHECK(g2.dx(1) == 0.3125);
  CHECK(g2.unflatten(65)[0] == 1);
  CHECK(g2.unflatten(65)[1] == 1);
}

TEST_CASE("spectral derivative examples") {
  const Grid g = Grid::make(1, 64, 2 * pi);
  RealField s = test::real_from_function(g, [](double x, double) { return std::sin(x); });
  RealField c = test::real_from_function(g, [](double x, double) { return std::cos(x); });
  CHECK(max_abs_difference(spectral_derivative(s, 1, 0), c) <= 1e-12);

  // the fourth-order symbol amplifies roundoff by k_nyquist^4; n = 32 keeps it small
  const Grid g32 = Grid::make(1, 32, 2 * pi);
  for (int k : {1, 5, 8}) {
    ComplexField e = test::from_function(g32, [k](double x, double) { return std::polar(1.0, k * x); });
    ComplexField d4 = spectral_derivative(e, 4, 0);
    double err = 0.0;
    for (std::size_t i = 0; i < g32.size(); ++i) err = std::max(err, std::abs(d4[i] - std::pow(k, 4) * e[i]));
    CHECK(err <= 1e-10 * std::pow(k, 4));
  }

  RealField one = test::real_from_function(g, [](double, double) { return 3.0; });
  for (int order = 1; order <= 4; ++order) CHECK(max_abs(spectral_derivative(one, order, 0)) <= 1e-13);
  CHECK_THROWS_AS(spectral_derivative(one, 5, 0), InvalidArgument);
  CHECK_THROWS_AS(spectral_derivative(one, 1, 1), InvalidArgument);
}

TEST_CASE("derivative linearity and composition") {
  const Grid g = Grid::make(1, 128, 10.0);
  const ComplexField f = test::rough_state(g, 1);
  const ComplexField h = test::rough_state(g, 2);
  const Complex alpha(0.3, -1.2), beta(-2.0, 0.5);
  for (int order = 1; order <= 4; ++order) {
    const ComplexField lhs = spectral_derivative(alpha * f + beta * h, order, 0);
    const ComplexField rhs = alpha * spectral_derivative(f, order, 0) + beta * spectral_derivative(h, order, 0);
    CHECK(max_abs_difference(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
  }
  const ComplexField twice = spectral_derivative(spectral_derivative(f, 1, 0), 1, 0);
  CHECK(max_abs_difference(twice, spectral_derivative(f, 2, 0)) <= 1e-10 * max_abs(twice));
}

TEST_CASE("mixed partials in 2D") {
  const Grid g = Grid::make(2, 32, 2 * pi);
  ComplexField f = test::from_function(g, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
  const std::array<MultiIndex, 2> alphas{MultiIndex{{1, 2}}, MultiIndex{{2, 2}}};
  const auto parts = spectral_partials(f, alphas);
  ComplexField d12 = test::from_function(g, [](double x, double y) { return -18.0 * std::cos(2 * x) * std::cos(3 * y); });
  ComplexField d22 = test::from_function(g, [](double x, double y) { return 36.0 * std::sin(2 * x) * std::cos(3 * y); });
  CHECK(max_abs_difference(parts[0], d12) <= 1e-11);
  CHECK(max_abs_difference(parts[1], d22) <= 1e-11);
}

TEST_CASE("translation is exact for band-limited fields") {
  const Grid g = Grid::make(1, 64, 2 * pi);
  ComplexField f = test::from_function(g, [](double x, double) { return std::polar(1.0, 3 * x) + std::cos(x); });
  ComplexField moved = translate(f, {0.7, 0.0});
  ComplexField ref = test::from_function(g, [](double x, double) {
    return std::polar(1.0, 3 * (x - 0.7)) + std::cos(x - 0.7);
  });
  CHECK(max_abs_difference(moved, ref) <= 1e-12);
}

TEST_CASE("hydro decomposition of a plane wave") {
  const Grid g = Grid::make(1, 64, 2 * pi);
  StateParams p;
  p.k = {3.0, 0.0};
  const HydroView h = hydro_decompose(make_state(StateKind::PlaneWave, p, g));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(h.rho[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(h.grad_phase[0][i] - 3.0) <= 1e-12);
    CHECK(std::abs(h.grad_log_density[0][i]) <= 1e-12);
    CHECK(std::abs(h.lap_phase[i]) <= 1e-11);
  }
  CHECK(h.masked_count == 0);
}

TEST_CASE("hydro decomposition of a real Gaussian") {
  // psi itself must decay to roundoff at the edge; the floor is lowered to match
  const Grid g = Grid::make(1, 128, 16.0);
  ComplexField psi = test::from_function(g, [](double x, double) { return std::exp(-x * x / 2); });
  const HydroView h = hydro_decompose(psi, {.relative_floor = 1e-24});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    if (std::abs(x) > 4) continue;
    CHECK(std::abs(h.grad_phase[0][i]) <= 1e-10);
    CHECK(std::abs(h.grad_log_density[0][i] + 2 * x) <= 1e-9);
    CHECK(std::abs(h.lap_density_over_density[i] - (4 * x * x - 2)) <= 1e-8);
  }
}

TEST_CASE("hydro decomposition of a spreading packet") {
  const Grid g = Grid::make(1, 128, 30.0);
  StateParams p;
  p.t = 1.3;
  p.t0 = 2.0;
  const HydroView h = hydro_decompose(make_state(StateKind::GaussianPacket, p, g), {.relative_floor = 1e-24});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    if (std::abs(x) > 8) continue;
    CHECK(std::abs(h.grad_phase[0][i] - p.t * x / (p.t * p.t + p.t0 * p.t0)) <= 1e-9);
  }
}

TEST_CASE("hydro fields are degree-zero homogeneous") {
  const Grid g = Grid::make(1, 128, 10.0);
  const ComplexField psi = test::random_state(g, 11);
  const HydroView a = hydro_decompose(psi);
  const HydroView b = hydro_decompose(Complex(0.4, -2.5) * psi);
  CHECK(max_abs_difference(a.grad_phase[0], b.grad_phase[0]) <= 1e-12 * max_abs(a.grad_phase[0]));
  CHECK(max_abs_difference(a.grad_log_density[0], b.grad_log_density[0]) <= 1e-12 * max_abs(a.grad_log_density[0]));
  CHECK(max_abs_difference(a.lap_phase, b.lap_phase) <= 1e-12 * max_abs(a.lap_phase));
  CHECK(max_abs_difference(a.lap_density_over_density, b.lap_density_over_density) <=
        1e-12 * max_abs(a.lap_density_over_density));
}

TEST_CASE("density gradient round trip") {
  const Grid g = Grid::make(2, 32, 8.0);
  const ComplexField psi = test::random_state(g, 5);
  const HydroView h = hydro_decompose(psi);
  const auto grad = gradient(h.rho);
  for (int a = 0; a < 2; ++a) {
    RealField rebuilt = h.rho;
    for (std::size_t i = 0; i < rebuilt.size(); ++i) rebuilt[i] *= h.grad_log_density[a][i];
    CHECK(max_abs_difference(rebuilt, grad[a]) <= 1e-10 * max_abs(grad[a]));
  }
}

TEST_CASE("mask overflow is an error") {
  const Grid g = Grid::make(1, 64, 10.0);
  ComplexField psi = test::from_function(g, [](double x, double) { return x < -1 ? Complex(1.0) : Complex(0.0); });
  CHECK_THROWS_AS(hydro_decompose(psi), NumericalError);
}

TEST_CASE("reference states") {
  const Grid g = Grid::make(1, 128, 10.0);
  StateParams p;
  p.k = {2 * pi / 10.0 * 3, 0.0};
  const ComplexField pw = make_state(StateKind::PlaneWave, p, g);
  CHECK(max_abs_difference(density(pw), RealField(g, std::vector<double>(g.size(), 1.0))) <= 1e-14);
  p.k = {1.0, 0.0};
  CHECK_THROWS_AS(make_state(StateKind::PlaneWave, p, g), InvalidArgument);

  StateParams r;
  r.seed = 7;
  const ComplexField r1 = make_state(StateKind::Random, r, g);
  const ComplexField r2 = make_state(StateKind::Random, r, g);
  CHECK(r1.data() == r2.data());
  CHECK(norm(r1) == doctest::Approx(1.0).epsilon(1e-12));
  r.seed = 8;
  CHECK(make_state(StateKind::Random, r, g).data() != r1.data());

  const Grid wide = Grid::make(1, 256, 40.0);
  StateParams gp;
  gp.t0 = 1.0;
  const ComplexField packet = make_state(StateKind::GaussianPacket, gp, wide);
  CHECK(norm(packet) == doctest::Approx(1.0).epsilon(1e-12));
  // t = 0: real Gaussian times the constant phase exp(-i pi/4)
  for (std::size_t i = 0; i < wide.size(); ++i) {
    if (std::abs(packet[i]) < 1e-6) continue;
    CHECK(std::abs(std::arg(packet[i]) + pi / 4) <= 1e-12);
  }
  gp.t0 = 400.0;  // sigma = 20 does not fit in a box of 40
  CHECK_THROWS_AS(make_state(StateKind::GaussianPacket, gp, wide), InvalidArgument);

  StateParams ho;
  ho.level = {1, 0};
  const ComplexField e1 = make_state(StateKind::HarmonicEigenstate, ho, wide);
  CHECK(norm(e1) == doctest::Approx(1.0).epsilon(1e-12));
  const Grid snug = Grid::make(1, 128, 18.0);
  StateParams co;
  co.x0 = {0.3, 0.0};
  co.p0 = {2 * pi / 18.0 * 4, 0.0};
  const HydroView hc = hydro_decompose(make_state(StateKind::Coherent, co, snug), {.relative_floor = 1e-24});
  for (std::size_t i = 0; i < snug.size(); ++i) {
    if (std::abs(snug.coord(0, i)) < 4) CHECK(std::abs(hc.lap_phase[i]) <= 1e-9);
  }
}

TEST_CASE("linear eigenstates of the oscillator") {
  const Grid g = Grid::make(1, 128, 20.0);
  const RealField v = harmonic_potential(g, 1.0);
  const Eigenpairs e = linear_eigenstates(v, 3);
  for (int n = 0; n < 3; ++n) CHECK(e.energies[n] == doctest::Approx(n + 0.5).epsilon(1e-10));
  StateParams p;
  const ComplexField ground = make_state(StateKind::HarmonicEigenstate, p, g);
  // agree up to a global phase
  const Complex ov = [&] {
    Complex s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += std::conj(e.states[0][i]) * ground[i] * g.dx(0);
    return s;
  }();
  CHECK(std::abs(ov) == doctest::Approx(1.0).epsilon(1e-10));
}
