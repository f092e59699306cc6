#include "hnls/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hnls {

HydroView hydro_decompose(const ComplexField& psi, const HydroOptions& options) {
  const Grid& g = psi.grid();
  if (!psi.all_finite()) throw InvalidArgument("wave function has non-finite samples");
  const std::size_t n = psi.size();
  const int dims = g.dims();
  const JetLayout layout(dims, options.jet_order);

  HydroView h{density(psi),
              {},
              {},
              RealField(g),
              RealField(g),
              std::vector<std::uint8_t>(n, 0),
              0.0,
              0,
              Jet(dims, options.jet_order, n),
              Jet(dims, options.jet_order, n)};

  double rho_max = 0.0;
  for (double r : h.rho.values()) rho_max = std::max(rho_max, r);
  if (!(rho_max > 0.0)) throw NumericalError("wave function vanishes identically");
  h.density_floor = options.relative_floor * rho_max;
  for (std::size_t i = 0; i < n; ++i) {
    if (h.rho[i] < h.density_floor) {
      h.node_mask[i] = 1;
      ++h.masked_count;
    }
  }
  const double fraction = static_cast<double>(h.masked_count) / static_cast<double>(n);
  if (fraction > options.max_masked_fraction) {
    throw NumericalError("node mask covers " + format_number(fraction * 100.0) +
                         "% of the grid; state too singular for the hydrodynamic scheme");
  }

  // Spectral partials of Psi for every nonzero multi-index.
  std::vector<MultiIndex> alphas(layout.indices().begin() + 1, layout.indices().end());
  const auto partials = spectral_partials(psi, alphas);
  const std::size_t m = layout.count();

  // Per point: ratios g_a = D^a Psi / Psi, then u = ln Psi derivatives via
  //   u_{a+e_i} = g_{a+e_i} - sum_{0<b<=a} C(a,b) g_b u_{a-b+e_i}.
  static constexpr double kBinomial[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  struct Term {
    std::size_t k, ratio, logd;
    double c;
  };
  // the recursion is the same at every point, so flatten it once
  std::vector<Term> terms;
  for (std::size_t k = 1; k < m; ++k) {
    const MultiIndex alpha = layout.indices()[k];
    const int axis = alpha.p[0] > 0 ? 0 : 1;
    MultiIndex base = alpha;
    --base.p[axis];
    for (int i = 0; i <= base.p[0]; ++i) {
      for (int j = 0; j <= base.p[1]; ++j) {
        if (i == 0 && j == 0) continue;
        MultiIndex rest{{base.p[0] - i, base.p[1] - j}};
        ++rest.p[axis];
        terms.push_back({k, layout.index_of(MultiIndex{{i, j}}), layout.index_of(rest),
                         kBinomial[base.p[0]][i] * kBinomial[base.p[1]][j]});
      }
    }
  }
  std::vector<std::span<double>> phase_out(m), logd_out(m);
  for (std::size_t k = 1; k < m; ++k) {
    phase_out[k] = h.phase[layout.indices()[k]];
    logd_out[k] = h.log_density[layout.indices()[k]];
  }

  std::vector<Complex> ratio(m), logd(m);
  for (std::size_t p = 0; p < n; ++p) {
    if (h.node_mask[p]) continue;
    const Complex inv = 1.0 / psi[p];
    ratio[0] = 1.0;
    logd[0] = 0.0;
    for (std::size_t k = 1; k < m; ++k) logd[k] = ratio[k] = partials[k - 1][p] * inv;
    // terms are grouped by k and only reach back to lower orders
    for (const Term& t : terms) logd[t.k] -= t.c * ratio[t.ratio] * logd[t.logd];
    for (std::size_t k = 1; k < m; ++k) {
      phase_out[k][p] = logd[k].imag();
      logd_out[k][p] = 2.0 * logd[k].real();
    }
  }

  for (int a = 0; a < dims; ++a) {
    MultiIndex e;
    e.p[a] = 1;
    RealField gs(g), gl(g);
    std::copy_n(h.phase[e].begin(), n, gs.data().begin());
    std::copy_n(h.log_density[e].begin(), n, gl.data().begin());
    h.grad_phase.push_back(std::move(gs));
    h.grad_log_density.push_back(std::move(gl));
  }
  if (options.jet_order >= 2) {
    const Jet lap_s = h.phase.laplacian();
    const Jet lap_l = h.log_density.laplacian();
    const auto ls = lap_s.value(), ll = lap_l.value();
    for (std::size_t p = 0; p < n; ++p) {
      if (h.node_mask[p]) continue;
      h.lap_phase[p] = ls[p];
      double grad2 = 0.0;
      for (int a = 0; a < dims; ++a) grad2 += h.grad_log_density[a][p] * h.grad_log_density[a][p];
      // Δρ/ρ = Δ ln ρ + |∇ ln ρ|²
      h.lap_density_over_density[p] = ll[p] + grad2;
    }
  }
  return h;
}

double integrate_unmasked(const RealField& f, const HydroView& hydro) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!hydro.masked(i)) s += f[i];
  }
  return s * f.grid().cell_volume();
}

}  // namespace hnls
