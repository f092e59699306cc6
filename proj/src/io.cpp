#include "hnls/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace hnls {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw NumericalError("cannot write '" + path + "'");
  return out;
}

// explicit byte order so the files do not depend on the host
void put(std::string& buf, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double v) { put(buf, std::bit_cast<std::uint64_t>(v), 8); }

std::uint64_t take(const std::string& buf, std::size_t& pos, int bytes) {
  if (pos + bytes > buf.size()) throw InvalidArgument("snapshot truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  pos += bytes;
  return v;
}
double take_f64(const std::string& buf, std::size_t& pos) { return std::bit_cast<double>(take(buf, pos, 8)); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckResult check_at_most(std::string name, double measured, double bound, std::string note) {
  // NaN never passes
  return {std::move(name), measured, bound, false, measured <= bound, std::move(note)};
}

CheckResult check_at_least(std::string name, double measured, double bound, std::string note) {
  return {std::move(name), measured, bound, true, measured >= bound, std::move(note)};
}

bool Report::all_passed() const {
  if (!error.empty()) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string summary_json(const Report& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format_version"] = kReportVersion;
  j["subcommand"] = report.subcommand;
  j["passed"] = report.all_passed();
  if (!report.error.empty()) j["error"] = report.error;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    // non-finite values have no JSON number form
    if (std::isfinite(c.measured)) {
      e["measured"] = c.measured;
    } else {
      e["measured"] = format_double(c.measured);
    }
    e["comparison"] = c.at_least ? ">=" : "<=";
    e["tolerance"] = c.bound;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  ordered_json values = ordered_json::object();
  for (const auto& [k, v] : report.values) values[k] = std::isfinite(v) ? ordered_json(v) : ordered_json(format_double(v));
  j["values"] = std::move(values);
  ordered_json labels = ordered_json::object();
  for (const auto& [k, v] : report.labels) labels[k] = v;
  j["labels"] = std::move(labels);
  return j.dump(2) + "\n";
}

void write_summary(const std::string& path, const Report& report) {
  auto out = open_out(path);
  out << summary_json(report);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InvalidArgument("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_observables_csv(const std::string& path, const std::vector<ObservablesSample>& rows, int dims) {
  std::vector<std::string> header{"t", "norm", "E_L", "E_ME", "x_mean", "p_mean", "I1", "I2", "cont_residual"};
  if (dims == 2) header.insert(header.end(), {"x_mean_y", "p_mean_y", "I1_y", "I2_y"});
  std::vector<std::vector<double>> table;
  table.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<double> row{r.t,         r.norm,    r.energy_linear, r.energy_total,         r.x_mean[0],
                            r.p_mean[0], r.i1[0],   r.i2[0],         r.continuity_residual};
    if (dims == 2) row.insert(row.end(), {r.x_mean[1], r.p_mean[1], r.i1[1], r.i2[1]});
    table.push_back(std::move(row));
  }
  write_csv(path, header, table);
}

void write_band_chart_csv(const std::string& path, const std::vector<FloquetSample>& samples) {
  std::vector<std::vector<double>> table;
  table.reserve(samples.size());
  for (const auto& s : samples) {
    table.push_back({s.parameter, s.trace, s.determinant, s.stable ? 1.0 : 0.0, s.nu.real(), s.nu.imag()});
  }
  write_csv(path, {"spectral_parameter", "trM", "det", "stable", "nu_real", "nu_imag"}, table);
}

void write_snapshot(const std::string& path, const ComplexField& psi, double t) {
  const Grid& g = psi.grid();
  std::string buf(kSnapshotMagic, sizeof kSnapshotMagic);
  put(buf, kSnapshotVersion, 4);
  put(buf, static_cast<std::uint32_t>(g.dims()), 4);
  put(buf, g.n(0), 8);
  put(buf, g.dims() == 2 ? g.n(1) : 1, 8);
  put_f64(buf, g.length(0));
  put_f64(buf, g.dims() == 2 ? g.length(1) : 0.0);
  put(buf, 1, 4);
  put(buf, 0, 4);
  put_f64(buf, t);
  buf.reserve(buf.size() + 16 * psi.size());
  for (const Complex& z : psi.data()) {
    put_f64(buf, z.real());
    put_f64(buf, z.imag());
  }
  auto out = open_out(path, true);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 8 || std::memcmp(buf.data(), kSnapshotMagic, 8) != 0) throw InvalidArgument("not a snapshot file");
  std::size_t pos = 8;
  if (take(buf, pos, 4) != kSnapshotVersion) throw InvalidArgument("unsupported snapshot version");
  const int dims = static_cast<int>(take(buf, pos, 4));
  const std::size_t n0 = take(buf, pos, 8), n1 = take(buf, pos, 8);
  const double l0 = take_f64(buf, pos), l1 = take_f64(buf, pos);
  if (take(buf, pos, 4) != 1) throw InvalidArgument("unsupported snapshot dtype");
  take(buf, pos, 4);
  const double t = take_f64(buf, pos);
  const Grid g = dims == 1 ? Grid::make(1, n0, l0) : Grid::make({n0, n1}, {l0, l1});
  ComplexField psi(g);
  for (auto& z : psi.data()) {
    const double re = take_f64(buf, pos);
    z = Complex(re, take_f64(buf, pos));
  }
  if (pos != buf.size()) throw InvalidArgument("trailing bytes in snapshot");
  return {std::move(psi), t};
}

}  // namespace hnls
