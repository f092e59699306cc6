#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnls/bands.hpp"
#include "hnls/evolution.hpp"
#include "hnls/states.hpp"

namespace hnls {

/// Bad or unknown configuration content. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

enum class Subcommand { Evolve, Bands, Check, Ehrenfest, Separability };
Subcommand parse_subcommand(const std::string& name);
std::string to_string(Subcommand s);

struct GridSpec {
  int dims = 1;
  std::vector<std::size_t> n{256};
  std::vector<double> length{48.0};
  Grid make() const;
};

struct StateSpec {
  StateKind kind = StateKind::GaussianPacket;
  StateParams params;
  // optional sinusoidal phase kick  amplitude·sin(2π turns x/L), per axis
  double phase_kick = 0.0;
  int phase_turns = 1;
};

struct PotentialSpec {
  enum class Kind { None, Harmonic } kind = Kind::None;
  double omega = 1.0;
  std::optional<RealField> make(const Grid& grid, const PhysicalConstants& c) const;
};

struct HillSpec {
  enum class Kind { Mathieu, Stationary } kind = Kind::Mathieu;
  double q = 0.0;
  // stationary mapping from the ME parameters in coefficients.me
  double amplitude = 0.0;
  // chart over a (Mathieu) or energy (stationary)
  double from = -1.0;
  double to = 10.0;
  std::size_t samples = 200;
  FloquetOptions floquet;
};

struct SeparabilitySpec {
  StateSpec second;
  PotentialSpec second_potential;
  std::size_t samples = 4;
};

struct CheckSpec {
  // "model" runs the invariants on the configured model, "acceptance" the
  // fixed criteria suite, "all" both
  std::string suite = "model";
  std::vector<int> criteria;  // empty = every acceptance criterion
};

struct RunConfig {
  int version = kConfigVersion;
  std::optional<Subcommand> subcommand;
  GridSpec grid;
  StateSpec state;
  CoeffSet coeffs = CoeffSet::zero(Variant::EXT);
  std::string coeffs_label = "linear";
  std::optional<MEParams> me;  // set when coefficients came from an me(...) preset or block
  PhysicalConstants constants;
  PotentialSpec potential;
  EvolutionConfig evolution;
  HillSpec bands;
  SeparabilitySpec separability;
  CheckSpec check;
  std::string out_dir = "out";
  bool write_snapshots = false;
};

/// Parses JSON text. Unknown keys, missing version and type errors all throw
/// ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace hnls
