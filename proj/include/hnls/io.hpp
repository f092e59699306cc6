#pragma once

#include <string>
#include <vector>

#include "hnls/bands.hpp"
#include "hnls/field.hpp"
#include "hnls/observables.hpp"

namespace hnls {

/// Shortest text that round-trips for any double: %.17g.
std::string format_double(double v);

/// One invariant check with its measured value. `bound` is an upper limit
/// unless `at_least` is set.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool at_least = false;
  bool passed = false;
  std::string note;
};

CheckResult check_at_most(std::string name, double measured, double bound, std::string note = {});
CheckResult check_at_least(std::string name, double measured, double bound, std::string note = {});

struct Report {
  std::string subcommand;
  std::vector<CheckResult> checks;
  // free-form scalar facts (dt used, step count, ...) kept in insertion order
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, std::string>> labels;
  std::string error;  // set on numerical abort
  bool all_passed() const;
};

inline constexpr int kReportVersion = 1;

std::string summary_json(const Report& report);
void write_summary(const std::string& path, const Report& report);

/// Columns t, norm, E_L, E_ME, x_mean, p_mean, I1, I2, cont_residual; in 2D
/// the y components follow as x_mean_y, p_mean_y, I1_y, I2_y.
void write_observables_csv(const std::string& path, const std::vector<ObservablesSample>& rows, int dims);

/// Columns spectral_parameter, trM, det, stable, nu_real, nu_imag.
void write_band_chart_csv(const std::string& path, const std::vector<FloquetSample>& samples);

/// Generic numeric table; header and rows must agree in width.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Snapshot layout, all little-endian:
//   char[8]  magic "HNLSSNAP"
//   u32      format version (1)
//   u32      dims
//   u64[2]   n per axis (unused axis = 1)
//   f64[2]   box length per axis (unused axis = 0)
//   u32      dtype (1 = complex128, interleaved re/im)
//   u32      reserved (0)
//   f64      time
// followed by n0·n1 complex samples in row-major order, re then im.
inline constexpr char kSnapshotMagic[8] = {'H', 'N', 'L', 'S', 'S', 'N', 'A', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const ComplexField& psi, double t);

struct Snapshot {
  ComplexField psi;
  double t = 0.0;
};
Snapshot read_snapshot(const std::string& path);

}  // namespace hnls
