#pragma once

#include "hnls/config.hpp"
#include "hnls/io.hpp"

namespace hnls {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNumerical = 3 };

struct RunOptions {
  bool quiet = false;
};

/// Runs one subcommand and writes its artifacts under config.out_dir.
/// Everything is computed before the directory is touched, so configuration
/// errors (ConfigError, or InvalidArgument raised while setting up) leave no
/// artifacts and are rethrown as ConfigError. Numerical aborts still write
/// summary.json with the error and return kExitNumerical.
int run(const RunConfig& config, Subcommand subcommand, const RunOptions& options = {});

/// The state, potential and grid a config describes.
ComplexField initial_state(const RunConfig& config);

}  // namespace hnls
