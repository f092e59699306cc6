#include "hnls/states.hpp"

#include "hnls/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace hnls {
namespace {

constexpr double kPi = std::numbers::pi;

void normalise(ComplexField& psi) {
  const double s = std::sqrt(norm(psi));
  if (!(s > 0.0)) throw NumericalError("cannot normalise a vanishing state");
  psi *= 1.0 / s;
}

// Normalised oscillator eigenfunction of the given level at coordinate x.
double oscillator_mode(int level, double x, double omega, const PhysicalConstants& c) {
  const double scale = std::sqrt(c.mass * omega / c.hbar);
  const double xi = x * scale;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  for (int n = 0; n < level; ++n) {
    const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(double(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur * std::sqrt(scale);
}

Complex free_gaussian(double x, const StateParams& p, int axis, const PhysicalConstants& c) {
  const double sigma2 = c.hbar * p.t0 / c.mass;
  const double v = p.p0[axis] / c.mass;
  const double xr = x - p.x0[axis] - v * p.t;
  const Complex spread(1.0, p.t / p.t0);
  const Complex envelope = std::exp(-xr * xr / (2.0 * sigma2 * spread)) / std::sqrt(spread);
  const double boost = (p.p0[axis] * x - 0.5 * p.p0[axis] * v * p.t) / c.hbar;
  return std::pow(kPi * sigma2, -0.25) * envelope * std::polar(1.0, boost);
}

}  // namespace

StateKind parse_state_kind(const std::string& name) {
  if (name == "plane_wave") return StateKind::PlaneWave;
  if (name == "gaussian_packet") return StateKind::GaussianPacket;
  if (name == "harmonic_eigenstate") return StateKind::HarmonicEigenstate;
  if (name == "coherent") return StateKind::Coherent;
  if (name == "random") return StateKind::Random;
  throw InvalidArgument("unknown state kind '" + name + "'");
}

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::PlaneWave: return "plane_wave";
    case StateKind::GaussianPacket: return "gaussian_packet";
    case StateKind::HarmonicEigenstate: return "harmonic_eigenstate";
    case StateKind::Coherent: return "coherent";
    case StateKind::Random: return "random";
  }
  return "unknown";
}

ComplexField make_state(StateKind kind, const StateParams& p, const Grid& grid,
                        const PhysicalConstants& c) {
  c.validate();
  ComplexField psi(grid);
  const int dims = grid.dims();
  switch (kind) {
    case StateKind::PlaneWave: {
      for (int a = 0; a < dims; ++a) {
        const double modes = p.k[a] * grid.length(a) / (2.0 * kPi);
        if (std::abs(modes - std::round(modes)) > 1e-9) {
          throw InvalidArgument("plane-wave k is not commensurate with the box");
        }
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.unflatten(i);
        double phase = 0.0;
        for (int a = 0; a < dims; ++a) phase += p.k[a] * grid.coord(a, idx[a]);
        psi[i] = std::polar(1.0, phase);
      }
      return psi;
    }
    case StateKind::GaussianPacket: {
      if (!(p.t0 > 0.0)) throw InvalidArgument("packet time scale t0 must be positive");
      // Global phase -pi/4 - atan(t/t0)/2 per axis; the atan part comes with
      // the 1/sqrt(1 + i t/t0) prefactor.
      const Complex global = std::polar(1.0, -0.25 * kPi);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.unflatten(i);
        Complex v = global;
        for (int a = 0; a < dims; ++a) v *= free_gaussian(grid.coord(a, idx[a]), p, a, c);
        psi[i] = v;
      }
      break;
    }
    case StateKind::HarmonicEigenstate:
    case StateKind::Coherent: {
      if (!(p.omega > 0.0)) throw InvalidArgument("oscillator frequency must be positive");
      const bool coherent = kind == StateKind::Coherent;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.unflatten(i);
        Complex v = 1.0;
        for (int a = 0; a < dims; ++a) {
          const double x = grid.coord(a, idx[a]);
          if (coherent) {
            v *= oscillator_mode(0, x - p.x0[a], p.omega, c) * std::polar(1.0, p.p0[a] * x / c.hbar);
          } else {
            v *= oscillator_mode(p.level[a], x, p.omega, c);
          }
        }
        psi[i] = v;
      }
      break;
    }
    case StateKind::Random: {
      std::mt19937_64 rng(p.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      const std::size_t cutoff = p.cutoff == 0 ? grid.n(0) / 8 : p.cutoff;
      ComplexField spec(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.unflatten(i);
        bool inside = true;
        for (int a = 0; a < dims; ++a) {
          const double modes = std::abs(grid.wavenumber(a, idx[a])) * grid.length(a) / (2.0 * kPi);
          if (modes > static_cast<double>(cutoff) + 0.5 || idx[a] == grid.n(a) / 2) inside = false;
        }
        // Draw for every bin so the sequence does not depend on the cutoff.
        const double re = normal(rng);
        const double im = normal(rng);
        if (inside) spec[i] = Complex(re, im);
      }
      ComplexField xi = fft_inverse(spec);
      const double m = max_abs(xi);
      if (!(m > 0.0)) throw NumericalError("random field has no modes below the cutoff");
      for (std::size_t i = 0; i < grid.size(); ++i) psi[i] = 1.0 + (p.amplitude / m) * xi[i];
      normalise(psi);
      return psi;
    }
  }
  require_decayed_tails(psi);
  normalise(psi);
  return psi;
}

double edge_density_ratio(const ComplexField& psi) {
  const Grid& g = psi.grid();
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::norm(psi[i]);
    peak = std::max(peak, r);
    const auto idx = g.unflatten(i);
    for (int a = 0; a < g.dims(); ++a) {
      if (idx[a] == 0 || idx[a] == g.n(a) - 1) edge = std::max(edge, r);
    }
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

void require_decayed_tails(const ComplexField& psi, double threshold) {
  const double ratio = edge_density_ratio(psi);
  if (ratio > threshold) {
    throw InvalidArgument("box too small: edge density ratio " + format_number(ratio) +
                          " exceeds " + format_number(threshold));
  }
}

ComplexField tensor_product(const ComplexField& psi1, const ComplexField& psi2) {
  const Grid& g1 = psi1.grid();
  const Grid& g2 = psi2.grid();
  if (g1.dims() != 1 || g2.dims() != 1) throw InvalidArgument("tensor product needs 1D factors");
  const Grid g = Grid::make({g1.n(0), g2.n(0)}, {g1.length(0), g2.length(0)});
  ComplexField out(g);
  for (std::size_t i = 0; i < g1.n(0); ++i) {
    for (std::size_t j = 0; j < g2.n(0); ++j) out[i * g2.n(0) + j] = psi1[i] * psi2[j];
  }
  return out;
}

RealField additive_potential(const RealField& v1, const RealField& v2) {
  const Grid& g1 = v1.grid();
  const Grid& g2 = v2.grid();
  if (g1.dims() != 1 || g2.dims() != 1) throw InvalidArgument("additive potential needs 1D parts");
  const Grid g = Grid::make({g1.n(0), g2.n(0)}, {g1.length(0), g2.length(0)});
  RealField out(g);
  for (std::size_t i = 0; i < g1.n(0); ++i) {
    for (std::size_t j = 0; j < g2.n(0); ++j) out[i * g2.n(0) + j] = v1[i] + v2[j];
  }
  return out;
}

RealField harmonic_potential(const Grid& grid, double omega, const PhysicalConstants& c) {
  RealField v(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double r2 = 0.0;
    for (int a = 0; a < grid.dims(); ++a) {
      const double x = grid.coord(a, idx[a]);
      r2 += x * x;
    }
    v[i] = 0.5 * c.mass * omega * omega * r2;
  }
  return v;
}

Eigenpairs linear_eigenstates(const RealField& potential, std::size_t count,
                              const PhysicalConstants& c) {
  const Grid& g = potential.grid();
  if (g.dims() != 1) throw InvalidArgument("linear_eigenstates supports 1D grids only");
  const std::size_t n = g.n(0);
  if (count == 0 || count > n) throw InvalidArgument("eigenpair count out of range");
  // Kinetic matrix T_jl = (hbar^2/2m) (1/n) sum_k k^2 cos(k (x_j - x_l)).
  std::vector<double> kernel(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double s = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double k = g.wavenumber(0, b);
      s += k * k * std::cos(k * static_cast<double>(d) * g.dx(0));
    }
    kernel[d] = c.hbar * c.hbar / (2.0 * c.mass) * s / static_cast<double>(n);
  }
  Eigen::MatrixXd h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      h(j, l) = kernel[j > l ? j - l : l - j];
    }
    h(j, j) += potential[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  Eigenpairs out;
  for (std::size_t s = 0; s < count; ++s) {
    ComplexField psi(g);
    std::size_t peak = 0;
    for (std::size_t j = 0; j < n; ++j) {
      psi[j] = solver.eigenvectors()(j, s);
      if (std::abs(psi[j]) > std::abs(psi[peak])) peak = j;
    }
    // Sign convention: the first largest-magnitude sample is positive.
    if (psi[peak].real() < 0.0) psi *= -1.0;
    normalise(psi);
    out.energies.push_back(solver.eigenvalues()(s));
    out.states.push_back(std::move(psi));
  }
  return out;
}

}  // namespace hnls
