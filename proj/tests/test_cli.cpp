#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rofdist/csv.hpp"

using namespace rofdist;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rofdist_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROFDIST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_measurement(const std::string& path, int rows = 64) {
  std::ofstream out(path);
  out << "freq_hz,mag_db,group_delay_s\n";
  for (int i = 0; i < rows; ++i) {
    const double f = 139.4e9 + 1.2e9 * i / (rows - 1);
    out << csv::format_double(f) << ",-1.8," << csv::format_double(5e-9) << "\n";
  }
}

}  // namespace

TEST_CASE("channel synth: worst-case attenuation lands at the configured dB") {
  TempDir dir;
  REQUIRE(run_cli("--out-dir " + dir.path.string() +
                  " channel synth --atten-high-db 2.4 --out ch.csv") == 0);
  const UnitFiberResponse unit = csv::read_channel_csv(dir.file("ch.csv"));
  double min_mag = 1e300;
  for (double m : unit.magnitude()) min_mag = std::min(min_mag, m);
  CHECK(min_mag == doctest::Approx(std::pow(10.0, -2.4 / 20.0)).epsilon(1e-12));
  CHECK(fs::exists(dir.file("channel_synth_manifest.json")));
}

TEST_CASE("channel ingest: constant group delay gives a linear-phase channel") {
  TempDir dir;
  write_measurement(dir.file("meas.csv"));
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " channel ingest --measurement " +
                  dir.file("meas.csv") + " --out ch.csv") == 0);
  const UnitFiberResponse unit = csv::read_channel_csv(dir.file("ch.csv"));
  // a pure delay: phase decrement per bin is constant
  const double expected = -2.0 * pi * 5e-9 * unit.grid().spacing_hz();
  for (int k = 1; k < unit.grid().size(); ++k) {
    const cplx step = unit.response()[k] / unit.response()[k - 1];
    CHECK(std::arg(step) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("channel file round trip is byte-stable") {
  TempDir dir;
  write_measurement(dir.file("meas.csv"));
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " channel ingest --measurement " +
                  dir.file("meas.csv") + " --out ch.csv") == 0);
  const UnitFiberResponse unit = csv::read_channel_csv(dir.file("ch.csv"));
  csv::write_channel_csv(dir.file("ch2.csv"), unit);
  CHECK(csv::read_file(dir.file("ch.csv")) == csv::read_file(dir.file("ch2.csv")));
}

TEST_CASE("simulate: deterministic per seed, matches the closed form when linear") {
  TempDir dir;
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " channel synth --out ch.csv") == 0);
  const std::string base = "--out-dir " + dir.path.string() + " --seed 11 simulate --channel " +
                           dir.file("ch.csv") + " --r 3 --a-mag 2 --a-phase-rad 0.4 --tau-s 5e-9";

  REQUIRE(run_cli(base + " --out cap1.csv") == 0);
  REQUIRE(run_cli(base + " --out cap2.csv") == 0);
  CHECK(csv::read_file(dir.file("cap1.csv")) == csv::read_file(dir.file("cap2.csv")));

  // lambda = 0, sigma = 0: capture must equal G^(r+1) H^r A e^(-j2pi f tau) s
  const UnitFiberResponse unit = csv::read_channel_csv(dir.file("ch.csv"));
  const Frame cap = csv::read_frame_csv(dir.file("cap1.csv"), unit.grid());
  const PilotSequence pilot = generate_pilot(unit.grid().size(), 1);
  const double gain = amplitude_from_db(2.4);
  const cplx a = std::polar(2.0, 0.4);
  for (int k = 0; k < unit.grid().size(); ++k) {
    cplx expected = a * pilot.symbols[k] * std::pow(gain, 4) * std::pow(unit.response()[k], 3);
    const double phi = -2.0 * pi * unit.grid().freq_hz(k) * 5e-9;
    expected *= cplx{std::cos(phi), std::sin(phi)};
    CHECK(std::abs(cap.freq[k] - expected) < 1e-9 * std::abs(expected));
  }
}

TEST_CASE("estimate: noiseless capture recovers the configured scene") {
  TempDir dir;
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " channel synth --out ch.csv") == 0);
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " simulate --channel " + dir.file("ch.csv") +
                  " --r 3 --a-mag 0.7 --tau-s 4.2e-9 --linear --out cap.csv") == 0);
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " estimate --channel " + dir.file("ch.csv") +
                  " --capture " + dir.file("cap.csv") + " --r-true 3 --out est.csv") == 0);

  std::ifstream in(dir.file("est.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "trial,r_true,r_hat,tau_hat_s,a_hat_re,a_hat_im,cost,sweeps,converged");
  std::stringstream ss(row);
  std::string field;
  std::getline(ss, field, ',');
  CHECK(field == "0");
  std::getline(ss, field, ',');
  CHECK(field == "3");  // r_true
  std::getline(ss, field, ',');
  CHECK(field == "3");  // r_hat
  std::getline(ss, field, ',');
  CHECK(std::stod(field) == doctest::Approx(4.2e-9).epsilon(1e-9));
}

TEST_CASE("sweep: two labeled curves, deterministic rerun, trials=1 degeneracy") {
  TempDir dir;
  std::ofstream cfg(dir.file("sweep.json"));
  cfg << R"({"bins": 32, "trials": 1, "amplitudes": [2.0, 5.0]})";
  cfg.close();

  const std::string cmd = "--out-dir " + dir.path.string() + " --seed 5 sweep --config " +
                          dir.file("sweep.json");
  REQUIRE(run_cli(cmd) == 0);
  const std::string curve1 = csv::read_file(dir.file("curve.csv"));
  const std::string trials1 = csv::read_file(dir.file("trials.csv"));

  std::istringstream stream(curve1);
  std::string line;
  std::getline(stream, line);
  CHECK(line == "lambda_label,amplitude,trials,errors,error_rate");
  int rows = 0, lambda1_rows = 0, lambda2_rows = 0;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    ++rows;
    if (line.rfind("lambda1,", 0) == 0) ++lambda1_rows;
    if (line.rfind("lambda2,", 0) == 0) ++lambda2_rows;
    const auto tail = line.substr(line.rfind(',') + 1);
    CHECK((tail == "0" || tail == "1"));
  }
  CHECK(rows == 4);
  CHECK(lambda1_rows == 2);
  CHECK(lambda2_rows == 2);

  REQUIRE(run_cli(cmd) == 0);
  CHECK(csv::read_file(dir.file("curve.csv")) == curve1);
  CHECK(csv::read_file(dir.file("trials.csv")) == trials1);
  CHECK(fs::exists(dir.file("sweep_manifest.json")));
}

TEST_CASE("failures exit nonzero and leave no partial outputs") {
  TempDir dir;
  CHECK(run_cli("--out-dir " + dir.path.string() + " simulate --channel " +
                dir.file("missing.csv") + " --out cap.csv") != 0);
  CHECK_FALSE(fs::exists(dir.file("cap.csv")));

  // r out of range
  REQUIRE(run_cli("--out-dir " + dir.path.string() + " channel synth --out ch.csv") == 0);
  CHECK(run_cli("--out-dir " + dir.path.string() + " simulate --channel " + dir.file("ch.csv") +
                " --r 7 --total-rus 5 --out cap.csv") != 0);
  CHECK_FALSE(fs::exists(dir.file("cap.csv")));

  // malformed measurement CSV
  std::ofstream bad(dir.file("bad.csv"));
  bad << "freq_hz,mag_db\n1,2\n";
  bad.close();
  CHECK(run_cli("--out-dir " + dir.path.string() + " channel ingest --measurement " +
                dir.file("bad.csv") + " --out ch2.csv") != 0);
  CHECK_FALSE(fs::exists(dir.file("ch2.csv")));
}
