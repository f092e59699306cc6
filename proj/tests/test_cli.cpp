#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hnls/config.hpp"
#include "hnls/io.hpp"
#include "hnls/runner.hpp"
#include "support.hpp"

using namespace hnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "hnls-cli-test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(HNLS_CLI) + " " + args + " --quiet 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kEvolveMe = R"({
  "version": 1,
  "grid": {"n": 32, "length": 48.0},
  "state": {"kind": "gaussian_packet", "t0": 12.0, "p0": 0.1308996938995747},
  "coefficients": {"preset": "me"},
  "evolution": {"t_end": 0.5, "dt": 0.01, "stride": 5}
})";

// CSV text → rows of doubles, header dropped
std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal") {
    const RunConfig c = parse_config(R"({"version": 1})");
    CHECK(c.coeffs.is_linear());
    CHECK(c.grid.n == std::vector<std::size_t>{256});
    CHECK_FALSE(c.subcommand.has_value());
  }
  SUBCASE("full") {
    const RunConfig c = parse_config(kEvolveMe);
    REQUIRE(c.me.has_value());
    CHECK(c.me->d1 == 0.1);
    CHECK(c.evolution.coeffs.a[0] == 0.1);
    CHECK(c.evolution.stride == 5);
    CHECK(c.state.params.p0[0] == doctest::Approx(2 * test::pi / 48));
  }
  SUBCASE("explicit arrays and 2D grid") {
    const RunConfig c = parse_config(R"({"version": 1,
      "grid": {"dims": 2, "n": [32, 64], "length": 20},
      "coefficients": {"variant": "dg", "a": [1, 0, 0, 0, 0], "b": [0, 0, 0, 0, 0], "coupling": 0.1}})");
    CHECK(c.grid.n == std::vector<std::size_t>{32, 64});
    CHECK(c.grid.length == std::vector<double>{20.0, 20.0});
    CHECK(c.coeffs.variant == Variant::DG);
  }
  SUBCASE("rejections name the key") {
    auto message = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string("accepted");
    };
    CHECK(message(R"({})").find("version") != std::string::npos);
    CHECK(message(R"({"version": 2})").find("version") != std::string::npos);
    CHECK(message(R"({"version": 1, "colour": 1})").find("colour: unknown key") != std::string::npos);
    CHECK(message(R"({"version": 1, "grid": {"n": 64, "size": 3}})").find("grid.size") != std::string::npos);
    CHECK(message(R"({"version": 1, "grid": {"n": 60}})").find("grid") != std::string::npos);
    CHECK(message(R"({"version": 1, "grid": {"n": "64"}})").find("grid.n") != std::string::npos);
    CHECK(message(R"({"version": 1, "state": {"kind": "cat"}})").find("state.kind") != std::string::npos);
    CHECK(message(R"j({"version": 1, "coefficients": {"preset": "me(1)"}})j").find("preset") != std::string::npos);
    CHECK(message(R"({"version": 1, "coefficients": {"preset": "me", "me": {"d1": 1, "b1": 0}}})") != "accepted");
    CHECK(message(R"({"version": 1, "evolution": {"stride": 0}})").find("stride") != std::string::npos);
    CHECK(message(R"({"version": 1, "check": {"criteria": [13]}})").find("criteria") != std::string::npos);
    CHECK(message("{\"version\": 1,") .find("JSON") != std::string::npos);
  }
}

TEST_CASE("serialization") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  const fs::path dir = scratch("io");
  fs::create_directories(dir);
  const Grid g = Grid::make({16, 32}, {3.0, 5.0});
  const ComplexField psi = test::random_state(Grid::make(1, 16, 3.0), 3);
  ComplexField two(g);
  for (std::size_t i = 0; i < g.size(); ++i) two[i] = Complex(0.5 * double(i), -1.0 / (1.0 + double(i)));
  write_snapshot((dir / "a.bin").string(), two, 0.25);
  const Snapshot s = read_snapshot((dir / "a.bin").string());
  CHECK(s.t == 0.25);
  CHECK(s.psi.grid() == g);
  CHECK(max_abs_difference(s.psi, two) == 0.0);

  // header layout and byte order
  const std::string raw = slurp(dir / "a.bin");
  REQUIRE(raw.size() == 8 + 4 + 4 + 16 + 16 + 4 + 4 + 8 + 16 * g.size());
  CHECK(raw.substr(0, 8) == "HNLSSNAP");
  CHECK(raw[12] == 2);
  CHECK(raw[16] == 16);
  CHECK(raw[24] == 32);
  double first_im;
  std::memcpy(&first_im, raw.data() + 64 + 8, 8);
  CHECK(first_im == -1.0);

  write_snapshot((dir / "b.bin").string(), psi, 0.0);
  CHECK(max_abs_difference(read_snapshot((dir / "b.bin").string()).psi, psi) == 0.0);
  std::ofstream(dir / "bad.bin") << "nonsense";
  CHECK_THROWS_AS(read_snapshot((dir / "bad.bin").string()), InvalidArgument);

  std::vector<FloquetSample> chart(2);
  chart[1].parameter = 0.5;
  chart[1].stable = true;
  write_band_chart_csv((dir / "chart.csv").string(), chart);
  std::vector<std::string> header;
  const auto rows = read_csv(dir / "chart.csv", &header);
  CHECK(header == std::vector<std::string>{"spectral_parameter", "trM", "det", "stable", "nu_real", "nu_imag"});
  CHECK(rows.size() == 2);
  CHECK(rows[1][3] == 1.0);
}

TEST_CASE("cli exit codes and artifacts") {
  SUBCASE("unknown key: exit 2, nothing written") {
    const fs::path dir = scratch("unknown");
    const fs::path cfg = write_config(dir, R"({"version": 1, "bogus": true})");
    CHECK(cli("evolve --config " + cfg.string() + " --out " + (dir / "out").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
  }
  SUBCASE("usage errors are configuration errors") {
    CHECK(cli("evolve") == 2);
    CHECK(cli("launch --config x") == 2);
  }
  SUBCASE("dt above the stability bound: exit 2") {
    const fs::path dir = scratch("dt");
    const fs::path cfg = write_config(dir, R"({"version": 1, "grid": {"n": 32, "length": 48},
      "coefficients": {"preset": "me"}, "evolution": {"t_end": 1, "dt": 5}})");
    CHECK(cli("evolve --config " + cfg.string() + " --out " + (dir / "out").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
  }
  SUBCASE("subcommand mismatch") {
    const fs::path dir = scratch("mismatch");
    const fs::path cfg = write_config(dir, R"({"version": 1, "subcommand": "bands"})");
    CHECK(cli("evolve --config " + cfg.string() + " --out " + (dir / "out").string()) == 2);
  }
  SUBCASE("linear check suite passes with tight norm drift") {
    const fs::path dir = scratch("check");
    const fs::path cfg = write_config(dir, R"({"version": 1, "grid": {"n": 128, "length": 40},
      "state": {"kind": "random", "seed": 3, "amplitude": 0.2, "cutoff": 4},
      "coefficients": {"preset": "linear"}, "evolution": {"t_end": 1, "dt": 0.01, "stride": 10}})");
    REQUIRE(cli("check --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["passed"] == true);
    bool found = false;
    for (const auto& c : summary["checks"]) {
      if (c["name"] == "norm drift") {
        found = true;
        CHECK(c["tolerance"] == 1e-8);
        CHECK(c["measured"].get<double>() <= 1e-8);
      }
    }
    CHECK(found);
  }
  SUBCASE("ME Gaussian evolve leaves I1 = I2 = 0") {
    const fs::path dir = scratch("evolve");
    const fs::path cfg = write_config(dir, kEvolveMe);
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
    std::vector<std::string> header;
    const auto rows = read_csv(dir / "out" / "observables.csv", &header);
    CHECK(header == std::vector<std::string>{"t", "norm", "E_L", "E_ME", "x_mean", "p_mean", "I1", "I2",
                                             "cont_residual"});
    REQUIRE(rows.size() == 11);
    for (const auto& r : rows) {
      CHECK(std::abs(r[6]) <= 1e-10);
      CHECK(std::abs(r[7]) <= 1e-10);
    }
    CHECK(rows.back()[0] == doctest::Approx(0.5));
  }
  SUBCASE("numerical abort: exit 3 with the error in the summary") {
    // k_nyquist far above sqrt(omega): the ME mode instability grows
    const fs::path dir = scratch("abort");
    const fs::path cfg = write_config(dir, R"({"version": 1, "grid": {"n": 128, "length": 48},
      "state": {"kind": "gaussian_packet", "t0": 12, "phase_kick": 0.3, "phase_turns": 2},
      "coefficients": {"preset": "me"}, "evolution": {"t_end": 5}})");
    CHECK(cli("evolve --config " + cfg.string() + " --out " + (dir / "out").string()) == 3);
    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["passed"] == false);
    CHECK(summary.contains("error"));
  }
  SUBCASE("bands writes the chart") {
    const fs::path dir = scratch("bands");
    const fs::path cfg = write_config(dir, R"({"version": 1,
      "bands": {"kind": "mathieu", "q": 0, "from": -0.5, "to": 9.7, "samples": 51}})");
    REQUIRE(cli("bands --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
    const auto edges = read_csv(dir / "out" / "band_edges.csv");
    REQUIRE(edges.size() == 4);
    for (int n = 0; n <= 3; ++n) CHECK(std::abs(edges[std::size_t(n)][0] - n * n) <= 1e-8);
    CHECK(read_csv(dir / "out" / "band_chart.csv").size() == 51);
  }
}

TEST_CASE("determinism and seed override") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, R"({"version": 1, "grid": {"n": 64, "length": 40},
    "state": {"kind": "random", "seed": 1, "amplitude": 0.2, "cutoff": 2},
    "coefficients": {"preset": "dg"}, "evolution": {"t_end": 0.2, "dt": 0.01, "stride": 4},
    "output": {"snapshots": true}})");
  auto run_to = [&](const std::string& name, const std::string& extra = "") {
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + (dir / name).string() + extra) == 0);
  };
  run_to("a");
  run_to("b");
  run_to("c", " --seed 2");
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    const auto name = e.path().filename();
    CHECK(slurp(e.path()) == slurp(dir / "b" / name));
    ++compared;
  }
  CHECK(compared == 2 + 6);  // observables, summary, snapshots at steps 0 4 8 12 16 20
  CHECK(slurp(dir / "a" / "observables.csv") != slurp(dir / "c" / "observables.csv"));
}

TEST_CASE("shipped configs parse") {
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(fs::path(HNLS_SOURCE_DIR) / "configs")) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    const RunConfig c = load_config(e.path().string());
    CHECK(c.subcommand.has_value());
    ++count;
  }
  CHECK(count >= 5);
}
