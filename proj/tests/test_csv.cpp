#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>

#include "rofdist/csv.hpp"
#include "rofdist/rng.hpp"

using namespace rofdist;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rofdist_csv_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  Rng rng(55);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.uniform(-1, 1), rng.uniform_int(-60, 60));
    CHECK(std::stod(csv::format_double(v)) == v);
  }
  CHECK(std::stod(csv::format_double(5e-9)) == 5e-9);
}

TEST_CASE("measurement csv parsing and validation") {
  TempDir dir;
  const std::string good = dir.file("table.csv");
  {
    std::ofstream out(good);
    out << "freq_hz,mag_db,group_delay_s\n";
    for (int i = 0; i < 12; ++i)
      out << (139.4e9 + i * 0.1e9) << ",-1.5," << 5e-9 << "\n";
  }
  const MeasurementTable table = csv::read_measurement_csv(good);
  CHECK(table.size() == 12);
  CHECK(table.min_freq_hz() == doctest::Approx(139.4e9));

  const std::string bad_header = dir.file("bad_header.csv");
  {
    std::ofstream out(bad_header);
    out << "frequency,magnitude,delay\n1,2,3\n";
  }
  CHECK_THROWS(csv::read_measurement_csv(bad_header));

  const std::string bad_number = dir.file("bad_number.csv");
  {
    std::ofstream out(bad_number);
    out << "freq_hz,mag_db,group_delay_s\n";
    for (int i = 0; i < 8; ++i) out << 139e9 + i << ",zero,5e-9\n";
  }
  CHECK_THROWS(csv::read_measurement_csv(bad_number));

  CHECK_THROWS(csv::read_measurement_csv(dir.file("missing.csv")));
}

TEST_CASE("channel csv: write, read, and byte-stable re-export") {
  TempDir dir;
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 64);
  const UnitFiberResponse unit = synth_channel(SyntheticFiberParams{}, grid);

  const std::string path = dir.file("channel.csv");
  csv::write_channel_csv(path, unit);
  const UnitFiberResponse loaded = csv::read_channel_csv(path);

  CHECK(loaded.grid().size() == 64);
  CHECK(loaded.grid().compatible(grid));
  for (int k = 0; k < 64; ++k) CHECK(loaded.response()[k] == unit.response()[k]);

  const std::string again = dir.file("channel2.csv");
  csv::write_channel_csv(again, loaded);
  CHECK(csv::read_file(path) == csv::read_file(again));

  const std::string ragged = dir.file("ragged.csv");
  {
    std::ofstream out(ragged);
    out << "freq_hz,re,im\n1,1,0\n2,1,0\n4,1,0\n5,1,0\n";
  }
  CHECK_THROWS(csv::read_channel_csv(ragged));
}

TEST_CASE("frame csv round trip") {
  TempDir dir;
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 32);
  const PilotSequence pilot = generate_pilot(32, 3);
  const Frame frame = apply_front_end(pilot, WirelessFrontEnd{{1.5, -0.5}, 2e-9}, grid);

  const std::string path = dir.file("frame.csv");
  csv::write_frame_csv(path, frame);
  const Frame loaded = csv::read_frame_csv(path, grid);
  CHECK(loaded.freq == frame.freq);

  CHECK_THROWS(csv::read_frame_csv(path, FrequencyGrid::make(140e9, 1e9, 64)));
}

TEST_CASE("trials and curve exports carry the documented schemas") {
  TrialOutcome t;
  t.trial_index = 7;
  t.r_true = 3;
  t.estimate.r_hat = 2;
  t.estimate.tau_hat_s = 5e-9;
  t.estimate.a_hat = {0.5, -0.25};
  t.estimate.cost = 1.25;
  t.estimate.sweeps = 4;
  t.estimate.converged = true;

  const std::string text = csv::trials_csv_text({t});
  CHECK(text == "trial,r_true,r_hat,tau_hat_s,a_hat_re,a_hat_im,cost,sweeps,converged\n"
                "7,3,2,5.0000000000000001e-09,0.5,-0.25,1.25,4,1\n");

  ErrorRateCurve curve;
  curve.label = "lambda1";
  curve.points.push_back({2.0, 10, 3, 0.3, 0.0});
  const std::string curve_text = csv::curve_csv_text({curve});
  CHECK(curve_text == "lambda_label,amplitude,trials,errors,error_rate\nlambda1,2,10,3,0.29999999999999999\n");
}

TEST_CASE("atomic_write leaves no partial file behind") {
  TempDir dir;
  const std::string path = dir.file("out.txt");
  csv::atomic_write(path, "hello\n");
  CHECK(csv::read_file(path) == "hello\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));
}
