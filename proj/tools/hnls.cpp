// Command-line front end: hnls <evolve|bands|check|ehrenfest|separability> --config PATH
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hnls/runner.hpp"
#include "hnls/runtime.hpp"

int main(int argc, char** argv) {
  hnls::keep_large_blocks();
  CLI::App app{"Doebner-Goldin type nonlinear Schroedinger toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  for (const char* name : {"evolve", "bands", "check", "ehrenfest", "separability"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "state seed (overrides state.seed)");
    sub->add_flag("--quiet", quiet, "no progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; real usage errors are configuration errors
    const int code = app.exit(e);
    return code == 0 ? 0 : hnls::kExitConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    const hnls::Subcommand sub = hnls::parse_subcommand(chosen->get_name());
    hnls::RunConfig cfg = hnls::load_config(config_path);
    if (cfg.subcommand && *cfg.subcommand != sub) {
      throw hnls::ConfigError("config is for '" + hnls::to_string(*cfg.subcommand) + "', not '" + chosen->get_name() +
                              "'");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.state.params.seed = *seed;
    hnls::RunOptions opts;
    opts.quiet = quiet;
    const int code = hnls::run(cfg, sub, opts);
    if (!quiet) std::cerr << (code == 0 ? "all checks passed" : "see " + cfg.out_dir + "/summary.json") << "\n";
    return code;
  } catch (const hnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hnls::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hnls::kExitNumerical;
  }
}
