// rofdist: simulate cascaded radio-over-fiber uplinks and estimate the hop
// count, delay, and complex gain from received captures.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rofdist/cascade.hpp"
#include "rofdist/csv.hpp"
#include "rofdist/estimate.hpp"
#include "rofdist/montecarlo.hpp"

using nlohmann::json;
using namespace rofdist;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = hardware concurrency
  std::string out_dir = ".";
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

// FNV-1a over the file bytes; enough to pin inputs in the manifest.
std::string file_digest(const std::string& path) {
  const std::string data = csv::read_file(path);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// The manifest is written before any result file; rerunning the recorded
// command with the recorded seed reproduces the outputs byte for byte.
void write_manifest(const GlobalOpts& g, const std::string& command, const json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["tool"] = "rofdist";
  manifest["version"] = ROFDIST_VERSION;
  manifest["command"] = command;
  manifest["master_seed"] = g.seed;
  manifest["jobs"] = g.jobs;
  manifest["config"] = config;
  json digests = json::object();
  for (const std::string& path : inputs) digests[path] = file_digest(path);
  manifest["input_digests"] = digests;
  manifest["outputs"] = outputs;
  csv::atomic_write(out_path(g, command + "_manifest.json"), manifest.dump(2) + "\n");
}

json grid_json(const FrequencyGrid& grid) {
  return json{{"center_hz", grid.center_hz()},
              {"bandwidth_hz", grid.bandwidth_hz()},
              {"bins", grid.size()}};
}

struct ChannelSynthArgs {
  double center_hz = 140e9;
  double bandwidth_hz = 1e9;
  int bins = 64;
  SyntheticFiberParams params;
  std::string out = "channel.csv";
};

int cmd_channel_synth(const GlobalOpts& g, const ChannelSynthArgs& a) {
  const FrequencyGrid grid = FrequencyGrid::make(a.center_hz, a.bandwidth_hz, a.bins);
  const UnitFiberResponse unit = synth_channel(a.params, grid);
  json config = grid_json(grid);
  config["atten_low_db"] = a.params.atten_low_db;
  config["atten_high_db"] = a.params.atten_high_db;
  config["mean_group_delay_s"] = a.params.mean_group_delay_s;
  config["group_delay_slope_s_per_hz"] = a.params.group_delay_slope_s_per_hz;
  write_manifest(g, "channel_synth", config, {}, {a.out});
  csv::write_channel_csv(out_path(g, a.out), unit);
  return 0;
}

struct ChannelIngestArgs {
  std::string measurement;
  double center_hz = 140e9;
  double bandwidth_hz = 1e9;
  int bins = 64;
  int smooth_window = 9;
  std::string out = "channel.csv";
};

int cmd_channel_ingest(const GlobalOpts& g, const ChannelIngestArgs& a) {
  const MeasurementTable table = csv::read_measurement_csv(a.measurement);
  const FrequencyGrid grid = FrequencyGrid::make(a.center_hz, a.bandwidth_hz, a.bins);
  const UnitFiberResponse unit = ingest_measurement(table, grid, a.smooth_window);
  json config = grid_json(grid);
  config["measurement"] = a.measurement;
  config["smooth_window"] = a.smooth_window;
  write_manifest(g, "channel_ingest", config, {a.measurement}, {a.out});
  csv::write_channel_csv(out_path(g, a.out), unit);
  return 0;
}

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "per_stage") return NoiseMode::per_stage;
  if (name == "aggregate_at_cu") return NoiseMode::aggregate_at_cu;
  throw std::invalid_argument("unknown noise mode '" + name + "'");
}

struct SimulateArgs {
  std::string config_path;
  std::string channel;
  int hops = 3;
  int total_rus = 5;
  double a_mag = 1.0;
  double a_phase_rad = 0.0;
  double tau_s = 5e-9;
  double gain_db = 2.4;
  double lambda_scale = 0.0;
  double lambda_phase_rad = 0.0;
  double noise_var = 0.0;
  std::string noise_mode = "per_stage";
  std::uint64_t pilot_seed = 1;
  bool linear = false;
  std::string out = "capture.csv";
};

void merge_simulate_config(SimulateArgs& a, const CLI::App* cmd) {
  const json j = json::parse(csv::read_file(a.config_path));
  const auto flag_given = [&](const char* name) { return cmd->count(name) > 0; };
  if (j.contains("channel") && !flag_given("--channel")) a.channel = j.at("channel");
  if (j.contains("r") && !flag_given("--r")) a.hops = j.at("r");
  if (j.contains("total_rus") && !flag_given("--total-rus")) a.total_rus = j.at("total_rus");
  if (j.contains("a_mag") && !flag_given("--a-mag")) a.a_mag = j.at("a_mag");
  if (j.contains("a_phase_rad") && !flag_given("--a-phase-rad")) a.a_phase_rad = j.at("a_phase_rad");
  if (j.contains("tau_s") && !flag_given("--tau-s")) a.tau_s = j.at("tau_s");
  if (j.contains("gain_db") && !flag_given("--gain-db")) a.gain_db = j.at("gain_db");
  if (j.contains("lambda_scale") && !flag_given("--lambda-scale")) a.lambda_scale = j.at("lambda_scale");
  if (j.contains("lambda_phase_rad") && !flag_given("--lambda-phase-rad"))
    a.lambda_phase_rad = j.at("lambda_phase_rad");
  if (j.contains("noise_var") && !flag_given("--noise-var")) a.noise_var = j.at("noise_var");
  if (j.contains("noise_mode") && !flag_given("--noise-mode")) a.noise_mode = j.at("noise_mode");
  if (j.contains("pilot_seed") && !flag_given("--pilot-seed")) a.pilot_seed = j.at("pilot_seed");
  if (j.contains("linear") && !flag_given("--linear")) a.linear = j.at("linear");
}

int cmd_simulate(const GlobalOpts& g, const SimulateArgs& a) {
  const UnitFiberResponse unit = csv::read_channel_csv(a.channel);
  const PilotSequence pilot = generate_pilot(unit.grid().size(), a.pilot_seed);
  const Frame x0 = apply_front_end(
      pilot, WirelessFrontEnd{std::polar(a.a_mag, a.a_phase_rad), a.tau_s}, unit.grid());

  CascadeConfig cfg;
  cfg.total_rus = a.total_rus;
  cfg.unit = unit;
  cfg.pa = AmplifierModel{amplitude_from_db(a.gain_db),
                          lambda_from_polar(a.lambda_scale, a.lambda_phase_rad)};
  cfg.noise_var = a.noise_var;
  cfg.noise_mode = parse_noise_mode(a.noise_mode);
  cfg.seed = g.seed;

  const Frame rx =
      a.linear ? propagate_linear(x0, a.hops, cfg) : propagate_nonlinear(x0, a.hops, cfg);

  json config{{"channel", a.channel},
              {"hops", a.hops},
              {"total_rus", a.total_rus},
              {"a_mag", a.a_mag},
              {"a_phase_rad", a.a_phase_rad},
              {"tau_s", a.tau_s},
              {"gain_db", a.gain_db},
              {"lambda_scale", a.lambda_scale},
              {"lambda_phase_rad", a.lambda_phase_rad},
              {"noise_var", a.noise_var},
              {"noise_mode", a.noise_mode},
              {"pilot_seed", a.pilot_seed},
              {"linear", a.linear}};
  write_manifest(g, "simulate", config, {a.channel}, {a.out});
  csv::write_frame_csv(out_path(g, a.out), rx);
  return 0;
}

struct EstimateArgs {
  std::string config_path;
  std::string channel;
  std::string capture;
  std::string estimator = "linear";  // or "cd"
  double gain_db = 2.4;
  double lambda_scale = 0.0;
  double lambda_phase_rad = 0.0;
  std::uint64_t pilot_seed = 1;
  int total_rus = 5;
  int r_true = -1;
  std::vector<double> amp_grid;
  std::string out = "estimate.csv";
};

void merge_estimate_config(EstimateArgs& a, const CLI::App* cmd) {
  const json j = json::parse(csv::read_file(a.config_path));
  const auto flag_given = [&](const char* name) { return cmd->count(name) > 0; };
  if (j.contains("channel") && !flag_given("--channel")) a.channel = j.at("channel");
  if (j.contains("capture") && !flag_given("--capture")) a.capture = j.at("capture");
  if (j.contains("estimator") && !flag_given("--estimator")) a.estimator = j.at("estimator");
  if (j.contains("gain_db") && !flag_given("--gain-db")) a.gain_db = j.at("gain_db");
  if (j.contains("lambda_scale") && !flag_given("--lambda-scale")) a.lambda_scale = j.at("lambda_scale");
  if (j.contains("lambda_phase_rad") && !flag_given("--lambda-phase-rad"))
    a.lambda_phase_rad = j.at("lambda_phase_rad");
  if (j.contains("pilot_seed") && !flag_given("--pilot-seed")) a.pilot_seed = j.at("pilot_seed");
  if (j.contains("total_rus") && !flag_given("--total-rus")) a.total_rus = j.at("total_rus");
  if (j.contains("r_true") && !flag_given("--r-true")) a.r_true = j.at("r_true");
  if (j.contains("amp_grid") && !flag_given("--amp-grid")) a.amp_grid = j.at("amp_grid").get<dvec>();
}

int cmd_estimate(const GlobalOpts& g, const EstimateArgs& a) {
  const UnitFiberResponse unit = csv::read_channel_csv(a.channel);
  const Frame rx = csv::read_frame_csv(a.capture, unit.grid());
  const PilotSequence pilot = generate_pilot(unit.grid().size(), a.pilot_seed);
  const double gain = amplitude_from_db(a.gain_db);

  EstimationResult result;
  if (a.estimator == "linear") {
    result = linear_nls(rx, LinearGridSpec::defaults(a.total_rus), pilot, unit, gain);
  } else if (a.estimator == "cd") {
    const AmplifierModel pa{gain, lambda_from_polar(a.lambda_scale, a.lambda_phase_rad)};
    NonlinearGridSpec spec = NonlinearGridSpec::defaults(a.total_rus);
    if (!a.amp_grid.empty()) spec.amp_grid = a.amp_grid;
    result = coordinate_descent(rx, spec, NonlinearModelContext::make(pilot, unit, pa));
  } else {
    throw std::invalid_argument("unknown estimator '" + a.estimator + "' (use linear or cd)");
  }
  if (result.ambiguous)
    std::cerr << "warning: estimate is ambiguous (multiple hop counts tie)\n";

  json config{{"channel", a.channel},
              {"capture", a.capture},
              {"estimator", a.estimator},
              {"gain_db", a.gain_db},
              {"lambda_scale", a.lambda_scale},
              {"lambda_phase_rad", a.lambda_phase_rad},
              {"pilot_seed", a.pilot_seed},
              {"total_rus", a.total_rus},
              {"r_true", a.r_true}};
  write_manifest(g, "estimate", config, {a.channel, a.capture}, {a.out});
  csv::write_estimate_csv(out_path(g, a.out), result, a.r_true);
  return 0;
}

// Sweep configs are JSON documents; flags override file values.
ExperimentConfig sweep_config_from_json(const json& j) {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  if (j.contains("measurement_csv")) cfg.measurement_csv = j.at("measurement_csv").get<std::string>();
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    if (s.contains("atten_low_db")) cfg.synth.atten_low_db = s.at("atten_low_db");
    if (s.contains("atten_high_db")) cfg.synth.atten_high_db = s.at("atten_high_db");
    if (s.contains("mean_group_delay_s")) cfg.synth.mean_group_delay_s = s.at("mean_group_delay_s");
    if (s.contains("group_delay_slope_s_per_hz"))
      cfg.synth.group_delay_slope_s_per_hz = s.at("group_delay_slope_s_per_hz");
  }
  if (j.contains("smooth_window")) cfg.smooth_window = j.at("smooth_window");
  if (j.contains("center_hz")) cfg.center_hz = j.at("center_hz");
  if (j.contains("bandwidth_hz")) cfg.bandwidth_hz = j.at("bandwidth_hz");
  if (j.contains("bins")) cfg.bins = j.at("bins");
  if (j.contains("total_rus")) cfg.total_rus = j.at("total_rus");
  if (j.contains("r_true")) cfg.r_true = j.at("r_true");
  if (j.contains("tau_true_s")) cfg.tau_true_s = j.at("tau_true_s");
  if (j.contains("gain_db")) cfg.gain_db = j.at("gain_db");
  if (j.contains("noise_var")) cfg.noise_var = j.at("noise_var");
  if (j.contains("noise_mode")) cfg.noise_mode = parse_noise_mode(j.at("noise_mode"));
  if (j.contains("amplitudes")) cfg.amplitudes = j.at("amplitudes").get<dvec>();
  if (j.contains("trials")) cfg.trials = j.at("trials");
  if (j.contains("estimator")) {
    const std::string name = j.at("estimator");
    if (name == "linear")
      cfg.estimator = EstimatorKind::linear;
    else if (name == "cd")
      cfg.estimator = EstimatorKind::coordinate_descent;
    else
      throw std::invalid_argument("unknown estimator '" + name + "' (use linear or cd)");
  }
  if (j.contains("lambdas")) {
    cfg.lambdas.clear();
    for (const json& l : j.at("lambdas"))
      cfg.lambdas.push_back({l.at("label").get<std::string>(),
                             lambda_from_polar(l.at("scale"), l.value("phase_rad", 0.0))});
  }
  return cfg;
}

struct SweepArgs {
  std::string config_path;
  int trials = -1;
  int r_true = -1;
};

int cmd_sweep(const GlobalOpts& g, const SweepArgs& a) {
  json file_config = json::object();
  if (!a.config_path.empty()) file_config = json::parse(csv::read_file(a.config_path));
  ExperimentConfig cfg = sweep_config_from_json(file_config);
  cfg.master_seed = g.seed;
  if (a.trials > 0) cfg.trials = a.trials;
  if (a.r_true > 0) cfg.r_true = a.r_true;

  json config = file_config;
  config["trials"] = cfg.trials;
  config["r_true"] = cfg.r_true;
  config["master_seed"] = cfg.master_seed;
  std::vector<std::string> inputs;
  if (!a.config_path.empty()) inputs.push_back(a.config_path);
  if (cfg.measurement_csv) inputs.push_back(*cfg.measurement_csv);
  write_manifest(g, "sweep", config, inputs, {"curve.csv", "trials.csv"});

  const SweepResult result = sweep(cfg, g.jobs);
  csv::write_curve_csv(out_path(g, "curve.csv"), result.curves);
  csv::write_trials_csv(out_path(g, "trials.csv"), result.trials);

  for (const ErrorRateCurve& curve : result.curves) {
    std::cout << curve.label << ":";
    for (const ErrorRatePoint& p : curve.points) std::cout << " " << p.error_rate;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascaded radio-over-fiber propagation distance estimation"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed for anything random");
  app.add_option("--jobs", g.jobs, "worker threads (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "directory for outputs and manifests");

  auto* channel = app.add_subcommand("channel", "build unit-fiber channel files");
  channel->require_subcommand(1);

  ChannelSynthArgs synth_args;
  auto* synth = channel->add_subcommand("synth", "synthesize a channel from parameters");
  synth->add_option("--f0-hz", synth_args.center_hz, "absolute center frequency");
  synth->add_option("--bandwidth-hz", synth_args.bandwidth_hz, "bandwidth");
  synth->add_option("--bins", synth_args.bins, "grid size K (even)");
  synth->add_option("--atten-low-db", synth_args.params.atten_low_db, "attenuation at band start");
  synth->add_option("--atten-high-db", synth_args.params.atten_high_db, "attenuation at band end");
  synth->add_option("--mean-group-delay-s", synth_args.params.mean_group_delay_s,
                    "per-unit-length group delay");
  synth->add_option("--group-delay-slope-s-per-hz", synth_args.params.group_delay_slope_s_per_hz,
                    "dispersion slope");
  synth->add_option("--out", synth_args.out, "output channel CSV");

  ChannelIngestArgs ingest_args;
  auto* ingest = channel->add_subcommand("ingest", "build a channel from a measurement table");
  ingest->add_option("--measurement", ingest_args.measurement, "freq_hz,mag_db,group_delay_s CSV")
      ->required();
  ingest->add_option("--f0-hz", ingest_args.center_hz, "absolute center frequency");
  ingest->add_option("--bandwidth-hz", ingest_args.bandwidth_hz, "bandwidth");
  ingest->add_option("--bins", ingest_args.bins, "grid size K (even)");
  ingest->add_option("--smooth-window", ingest_args.smooth_window, "odd moving-average window");
  ingest->add_option("--out", ingest_args.out, "output channel CSV");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "propagate a pilot through the cascade");
  sim->add_option("--config", sim_args.config_path, "JSON config; flags override file values");
  sim->add_option("--channel", sim_args.channel, "channel CSV");
  sim->add_option("--r", sim_args.hops, "hop count (entry RU index)");
  sim->add_option("--total-rus", sim_args.total_rus, "number of RUs in the cascade");
  sim->add_option("--a-mag", sim_args.a_mag, "front-end gain magnitude |A|");
  sim->add_option("--a-phase-rad", sim_args.a_phase_rad, "front-end gain phase");
  sim->add_option("--tau-s", sim_args.tau_s, "front-end delay");
  sim->add_option("--gain-db", sim_args.gain_db, "amplifier gain in dB");
  sim->add_option("--lambda-scale", sim_args.lambda_scale, "nonlinearity scale (0 = linear)");
  sim->add_option("--lambda-phase-rad", sim_args.lambda_phase_rad, "nonlinearity phase");
  sim->add_option("--noise-var", sim_args.noise_var, "noise variance per complex sample");
  sim->add_option("--noise-mode", sim_args.noise_mode, "per_stage or aggregate_at_cu");
  sim->add_option("--pilot-seed", sim_args.pilot_seed, "pilot sequence seed");
  sim->add_flag("--linear", sim_args.linear, "frequency-domain linear cascade");
  sim->add_option("--out", sim_args.out, "output capture CSV");

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate", "estimate (r, tau, A) from a capture");
  est->add_option("--config", est_args.config_path, "JSON config; flags override file values");
  est->add_option("--channel", est_args.channel, "channel CSV");
  est->add_option("--capture", est_args.capture, "capture CSV");
  est->add_option("--estimator", est_args.estimator, "linear or cd");
  est->add_option("--gain-db", est_args.gain_db, "amplifier gain in dB");
  est->add_option("--lambda-scale", est_args.lambda_scale, "nonlinearity scale");
  est->add_option("--lambda-phase-rad", est_args.lambda_phase_rad, "nonlinearity phase");
  est->add_option("--pilot-seed", est_args.pilot_seed, "pilot sequence seed");
  est->add_option("--total-rus", est_args.total_rus, "number of RUs");
  est->add_option("--r-true", est_args.r_true, "ground truth r for the output row, if known");
  est->add_option("--amp-grid", est_args.amp_grid, "explicit |A| grid for the cd estimator");
  est->add_option("--out", est_args.out, "output result CSV");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "Monte Carlo error-rate campaign");
  sw->add_option("--config", sweep_args.config_path, "JSON experiment config");
  sw->add_option("--trials", sweep_args.trials, "override trials per point");
  sw->add_option("--r-true", sweep_args.r_true, "override the true hop count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_channel_synth(g, synth_args);
    if (ingest->parsed()) return cmd_channel_ingest(g, ingest_args);
    if (sim->parsed()) {
      if (!sim_args.config_path.empty()) merge_simulate_config(sim_args, sim);
      if (sim_args.channel.empty()) throw std::invalid_argument("simulate: --channel is required");
      return cmd_simulate(g, sim_args);
    }
    if (est->parsed()) {
      if (!est_args.config_path.empty()) merge_estimate_config(est_args, est);
      if (est_args.channel.empty()) throw std::invalid_argument("estimate: --channel is required");
      if (est_args.capture.empty()) throw std::invalid_argument("estimate: --capture is required");
      return cmd_estimate(g, est_args);
    }
    if (sw->parsed()) return cmd_sweep(g, sweep_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
