#include "hnls/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>

#include "hnls/checks.hpp"
#include "hnls/currents.hpp"
#include "hnls/diagnostics.hpp"

namespace hnls {

namespace {

namespace fs = std::filesystem;

// one file to write once everything has been computed
struct Artifact {
  std::string name;
  std::function<void(const std::string&)> write;
};

struct Outcome {
  Report report;
  std::vector<Artifact> files;
};

void say(const RunOptions& o, const std::string& msg) {
  if (!o.quiet) std::cerr << msg << "\n";
}

double max_norm_drift(const std::vector<ObservablesSample>& rows) {
  double d = 0.0;
  for (const auto& r : rows) d = std::max(d, std::abs(r.norm - rows.front().norm));
  return d;
}

EvolutionConfig evolution_for(const RunConfig& cfg, const Grid& g) {
  EvolutionConfig e = cfg.evolution;
  e.coeffs = cfg.coeffs;
  e.constants = cfg.constants;
  e.potential = cfg.potential.make(g, cfg.constants);
  if (!(e.t_end > 0.0)) throw ConfigError("evolution.t_end: must be positive for this subcommand");
  return e;
}

void add_observable_values(Report& r, const Trajectory& t) {
  double i1 = 0.0, i2 = 0.0, cont = 0.0;
  for (const auto& o : t.observables) {
    i1 = std::max({i1, std::abs(o.i1[0]), std::abs(o.i1[1])});
    i2 = std::max({i2, std::abs(o.i2[0]), std::abs(o.i2[1])});
    cont = std::max(cont, o.continuity_residual);
  }
  r.values.push_back({"dt", t.dt});
  r.values.push_back({"t_final", t.times.back()});
  r.values.push_back({"max_abs_I1", i1});
  r.values.push_back({"max_abs_I2", i2});
  r.values.push_back({"max_cont_residual", cont});
  if (!t.observables.empty()) {
    r.values.push_back({"E_L_final", t.observables.back().energy_linear});
    r.values.push_back({"E_ME_final", t.observables.back().energy_total});
  }
}

Outcome do_evolve(const RunConfig& cfg, const RunOptions& o) {
  Outcome out;
  const ComplexField psi0 = initial_state(cfg);
  EvolutionConfig e = evolution_for(cfg, psi0.grid());
  e.keep_snapshots = cfg.write_snapshots;
  const Trajectory t = evolve(psi0, e);
  say(o, "evolve: " + std::to_string(t.times.size()) + " samples, dt " + format_double(t.dt));
  out.report.checks.push_back(
      check_at_most("norm drift", max_norm_drift(t.observables), e.norm_drift_tolerance, "evolution.norm_drift_tolerance"));
  add_observable_values(out.report, t);
  const int dims = psi0.grid().dims();
  out.files.push_back({"observables.csv", [t, dims](const std::string& p) { write_observables_csv(p, t.observables, dims); }});
  if (cfg.write_snapshots) {
    for (std::size_t k = 0; k < t.snapshots.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%05zu.bin", k);
      const ComplexField s = t.snapshots[k];
      const double time = t.times[k];
      out.files.push_back({name, [s, time](const std::string& p) { write_snapshot(p, s, time); }});
    }
  }
  return out;
}

Outcome do_ehrenfest(const RunConfig& cfg, const RunOptions& o) {
  Outcome out;
  const ComplexField psi0 = initial_state(cfg);
  EvolutionConfig e = evolution_for(cfg, psi0.grid());
  e.keep_snapshots = true;
  const Trajectory t = evolve(psi0, e);
  say(o, "ehrenfest: " + std::to_string(t.times.size()) + " snapshots");
  const RealField* v = e.potential ? &*e.potential : nullptr;
  const EhrenfestReport r = ehrenfest_consistency(t, v, e.coeffs, e.constants, e.hydro);
  const auto p = momentum_mean(psi0, e.constants);
  const double scale = std::max({std::abs(p[0]), std::abs(p[1]), 1.0});
  auto& checks = out.report.checks;
  checks.push_back(check_at_most("position relation residual", r.max_r1, 1e-4 * scale, "1e-4 max(|<p>|, 1)"));
  checks.push_back(check_at_most("momentum relation residual", r.max_r2, 1e-4 * scale, "1e-4 max(|<p>|, 1)"));
  out.report.values.push_back({"max_r1_uncorrected", r.max_r1_uncorrected});
  out.report.values.push_back({"max_r2_uncorrected", r.max_r2_uncorrected});
  out.report.values.push_back({"max_I1", r.max_i1});
  out.report.values.push_back({"max_I2", r.max_i2});
  add_observable_values(out.report, t);

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    rows.push_back({r.times[k], r.r1[k][0], r.r2[k][0], r.r1[k][1], r.r2[k][1]});
  }
  const int dims = psi0.grid().dims();
  out.files.push_back({"observables.csv", [t, dims](const std::string& p) { write_observables_csv(p, t.observables, dims); }});
  out.files.push_back({"ehrenfest.csv", [rows](const std::string& p) {
                         write_csv(p, {"t", "r1", "r2", "r1_y", "r2_y"}, rows);
                       }});
  return out;
}

Outcome do_separability(const RunConfig& cfg, const RunOptions& o) {
  Outcome out;
  if (cfg.grid.dims != 1) throw ConfigError("grid.dims: separability takes 1D factors");
  const ComplexField a = initial_state(cfg);
  RunConfig second = cfg;
  second.state = cfg.separability.second;
  const ComplexField b = initial_state(second);
  const auto v1 = cfg.potential.make(a.grid(), cfg.constants);
  const auto v2 = cfg.separability.second_potential.make(b.grid(), cfg.constants);
  SeparabilityConfig s;
  s.coeffs = cfg.coeffs;
  s.t_end = cfg.evolution.t_end;
  s.dt = cfg.evolution.dt;
  s.integrator = cfg.evolution.integrator;
  s.samples = cfg.separability.samples;
  s.constants = cfg.constants;
  s.hydro = cfg.evolution.hydro;
  s.norm_drift_tolerance = cfg.evolution.norm_drift_tolerance;
  if (!(s.t_end > 0.0)) throw ConfigError("evolution.t_end: must be positive for this subcommand");
  const SeparabilityReport r = separability_test(a, b, v1 ? &*v1 : nullptr, v2 ? &*v2 : nullptr, s);
  say(o, "separability: max deviation " + format_double(r.max_deviation));
  if (cfg.coeffs.forbidden == 0.0) {
    out.report.checks.push_back(check_at_most("2D vs product deviation", r.max_deviation, 1e-6));
  } else {
    out.report.checks.push_back(check_at_least("2D vs product deviation, forbidden term on", r.max_deviation, 1e-3,
                                               "violation expected"));
  }
  out.report.values.push_back({"dt", r.dt});
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.times.size(); ++k) rows.push_back({r.times[k], r.deviations[k]});
  out.files.push_back({"separability.csv", [rows](const std::string& p) { write_csv(p, {"t", "deviation"}, rows); }});
  return out;
}

Outcome do_bands(const RunConfig& cfg, const RunOptions& o) {
  Outcome out;
  const HillSpec& b = cfg.bands;
  HillEquation hill = HillEquation::mathieu(0.0, b.q);
  if (b.kind == HillSpec::Kind::Stationary) {
    if (!cfg.me) throw ConfigError("bands.kind: stationary needs ME coefficients");
    hill = hill_from_stationary(*cfg.me, b.amplitude, 0.0, cfg.constants);
    out.report.values.push_back({"a_at_zero_energy", hill.q0});
    out.report.values.push_back({"x_scale", hill.provenance->x_scale});
  }
  const FloquetResult r = floquet_analyze(hill, b.from, b.to, b.samples, b.floquet);
  say(o, "bands: " + std::to_string(r.edges.size()) + " edges in [" + format_double(b.from) + ", " +
             format_double(b.to) + "]");
  double det = 0.0;
  for (const auto& s : r.samples) det = std::max(det, det_drift(s));
  out.report.checks.push_back(check_at_most("max |det M - 1|", det, 1e-10, "relative to max(1, |m00 m11| + |m01 m10|)"));
  out.report.values.push_back({"period", hill.period()});
  out.report.values.push_back({"edge_count", static_cast<double>(r.edges.size())});
  std::vector<std::vector<double>> edges;
  for (const auto& e : r.edges) edges.push_back({e.parameter, e.kind == EdgeKind::Periodic ? 0.0 : 1.0});
  out.files.push_back({"band_chart.csv", [r](const std::string& p) { write_band_chart_csv(p, r.samples); }});
  out.files.push_back({"band_edges.csv", [edges](const std::string& p) {
                         write_csv(p, {"spectral_parameter", "antiperiodic"}, edges);
                       }});
  return out;
}

Outcome do_check(const RunConfig& cfg, const RunOptions& o) {
  Outcome out;
  const bool model = cfg.check.suite != "acceptance";
  const bool acceptance = cfg.check.suite != "model";
  if (model) {
    const ComplexField psi0 = initial_state(cfg);
    const Complex lambda = std::polar(2.0, 1.0);
    const HydroView h = hydro_decompose(psi0, cfg.evolution.hydro);
    double worst = 0.0;
    for (const auto* x : {&cfg.coeffs.a, &cfg.coeffs.b}) {
      const double scale = max_abs(eval_functional(*x, cfg.coeffs.variant, h));
      if (scale > 0.0) worst = std::max(worst, homogeneity_check(cfg.coeffs.variant, *x, psi0, lambda, cfg.evolution.hydro) / scale);
    }
    out.report.checks.push_back(check_at_most("homogeneity (relative to |F|max)", worst, 1e-12));

    RunConfig e = cfg;
    if (!(e.evolution.t_end > 0.0)) e.evolution.t_end = 1.0;
    EvolutionConfig ec = evolution_for(e, psi0.grid());
    ec.keep_snapshots = false;
    const Trajectory t = evolve(psi0, ec);
    out.report.checks.push_back(check_at_most("norm drift", max_norm_drift(t.observables), 1e-8));
    double cont = 0.0;
    for (const auto& s : t.observables) cont = std::max(cont, s.continuity_residual);
    out.report.checks.push_back(check_at_most("continuity residual", cont, 1e-6, "trapezoid in time, O(dt^2)"));
    if (cfg.me && cfg.me->d1 != 0.0) {
      StateParams p;
      p.k = {2 * std::numbers::pi * 3 / psi0.grid().length(0), 0.0};
      const ComplexField pw = make_state(StateKind::PlaneWave, p, psi0.grid(), cfg.constants);
      out.report.checks.push_back(
          check_at_most("H_NL residual on a plane wave", max_abs(nonlinear_part(pw, cfg.coeffs, cfg.constants)), 1e-10));
    }
    add_observable_values(out.report, t);
    const int dims = psi0.grid().dims();
    out.files.push_back({"observables.csv", [t, dims](const std::string& p) { write_observables_csv(p, t.observables, dims); }});
  }
  if (acceptance) {
    std::vector<int> ids = cfg.check.criteria;
    if (ids.empty()) {
      for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    }
    for (int id : ids) {
      say(o, "check: criterion " + std::to_string(id) + " (" + criterion_title(id) + ")");
      const Criterion c = run_criterion(id, cfg.state.params.seed);
      for (CheckResult r : c.checks) {
        r.name = "[" + std::to_string(id) + "] " + r.name;
        out.report.checks.push_back(std::move(r));
      }
    }
  }
  return out;
}

void write_all(const RunConfig& cfg, Subcommand sub, const Outcome& out) {
  fs::create_directories(cfg.out_dir);
  for (const auto& f : out.files) f.write((fs::path(cfg.out_dir) / f.name).string());
  write_summary((fs::path(cfg.out_dir) / "summary.json").string(), out.report);
  (void)sub;
}

}  // namespace

ComplexField initial_state(const RunConfig& cfg) {
  const Grid g = cfg.grid.make();
  ComplexField psi = make_state(cfg.state.kind, cfg.state.params, g, cfg.constants);
  if (cfg.state.phase_kick != 0.0) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unflatten(i);
      double s = 0.0;
      for (int a = 0; a < g.dims(); ++a) {
        s += std::sin(2 * std::numbers::pi * cfg.state.phase_turns * g.coord(a, idx[a]) / g.length(a));
      }
      psi[i] *= std::polar(1.0, cfg.state.phase_kick * s);
    }
  }
  return psi;
}

int run(const RunConfig& cfg, Subcommand sub, const RunOptions& options) {
  Outcome out;
  try {
    switch (sub) {
      case Subcommand::Evolve: out = do_evolve(cfg, options); break;
      case Subcommand::Ehrenfest: out = do_ehrenfest(cfg, options); break;
      case Subcommand::Separability: out = do_separability(cfg, options); break;
      case Subcommand::Bands: out = do_bands(cfg, options); break;
      case Subcommand::Check: out = do_check(cfg, options); break;
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const NumericalError& e) {
    Outcome failed;
    failed.report.subcommand = to_string(sub);
    failed.report.error = e.what();
    if (const auto* a = dynamic_cast<const EvolutionAborted*>(&e)) {
      failed.report.values.push_back({"last_good_time", a->last_good_time()});
    }
    write_all(cfg, sub, failed);
    say(options, std::string("numerical abort: ") + e.what());
    return kExitNumerical;
  }
  out.report.subcommand = to_string(sub);
  out.report.labels.push_back({"coefficients", cfg.coeffs_label});
  out.report.labels.push_back({"state", to_string(cfg.state.kind)});
  write_all(cfg, sub, out);
  for (const auto& c : out.report.checks) {
    if (!c.passed) say(options, "FAIL " + c.name + ": " + format_double(c.measured));
  }
  return out.report.all_passed() ? kExitPass : kExitCheckFailed;
}

}  // namespace hnls
