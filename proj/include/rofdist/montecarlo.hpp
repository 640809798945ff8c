#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rofdist/cascade.hpp"
#include "rofdist/estimate.hpp"

namespace rofdist {

enum class EstimatorKind { linear, coordinate_descent };

/// One nonlinearity setting; each entry produces one error-rate curve.
struct LambdaSetting {
  std::string label;
  cplx value{0.0, 0.0};
};

/// Full description of one Monte Carlo campaign: channel source, scene ground
/// truth, amplifier settings, the |A| sweep, and estimator selection.
struct ExperimentConfig {
  // channel source: a measurement CSV if given, synthetic parameters otherwise
  std::optional<std::string> measurement_csv;
  SyntheticFiberParams synth{};
  int smooth_window = 9;
  double center_hz = 140e9;
  double bandwidth_hz = 1e9;
  int bins = 64;

  // scene
  int total_rus = 5;
  int r_true = 3;
  double tau_true_s = 5e-9;
  double gain_db = 2.4;
  std::vector<LambdaSetting> lambdas;  // one curve per entry
  double noise_var = 1.0;
  NoiseMode noise_mode = NoiseMode::per_stage;

  // sweep
  dvec amplitudes;  // |A| points; the per-trial gain phase is random
  int trials = 1000;
  std::uint64_t master_seed = 1;
  EstimatorKind estimator = EstimatorKind::coordinate_descent;

  // Estimator grids. When unset, defaults are derived from the scene
  // (r candidates 1..total_rus) and each trial's |A| hypothesis is pinned to
  // its own configured drive level -- the campaign calibrates the drive, the
  // estimator resolves phase, delay, and hop count. Set nonlinear_spec
  // explicitly to search a free |A| grid instead.
  std::optional<LinearGridSpec> linear_spec;
  std::optional<NonlinearGridSpec> nonlinear_spec;

  /// The desk-scale default campaign: both published nonlinearity factors and
  /// an 8-point logarithmic amplitude ladder spanning the amplifiers' linear
  /// through strongly nonlinear drive levels.
  static ExperimentConfig defaults();
};

struct TrialOutcome {
  int lambda_index = 0;
  int amplitude_index = 0;
  int trial_index = 0;
  int r_true = 0;
  EstimationResult estimate;
  bool success = false;
  double wall_s = 0.0;
};

struct ErrorRatePoint {
  double amplitude = 0.0;
  int trials = 0;
  int errors = 0;
  double error_rate = 0.0;
  double mean_wall_s = 0.0;  // diagnostics only, never written to CSV
};

struct ErrorRateCurve {
  std::string label;
  std::vector<ErrorRatePoint> points;
};

struct SweepResult {
  std::vector<ErrorRateCurve> curves;
  std::vector<TrialOutcome> trials;  // ordered by (lambda, amplitude, trial)
};

/// Channel and grids resolved once per campaign so individual trials don't
/// repeat the ingestion work.
class ResolvedExperiment {
 public:
  static ResolvedExperiment make(const ExperimentConfig& cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const UnitFiberResponse& unit() const { return unit_; }
  const LinearGridSpec& linear_spec() const { return linear_spec_; }
  const NonlinearGridSpec& nonlinear_spec() const { return nonlinear_spec_; }

 private:
  ExperimentConfig cfg_;
  UnitFiberResponse unit_;
  LinearGridSpec linear_spec_;
  NonlinearGridSpec nonlinear_spec_;
};

/// One seeded trial: draw the pilot and the gain phase from a stream derived
/// from (master_seed, amplitude index, trial index) -- the same stream for
/// every lambda, so curves are compared on common random numbers -- simulate
/// the cascade, run the selected estimator, and record whether r was
/// recovered. Bit-deterministic per derived seed.
TrialOutcome run_trial(const ResolvedExperiment& exp, int lambda_index, int amplitude_index,
                       int trial_index);

/// Convenience overload resolving the config first.
TrialOutcome run_trial(const ExperimentConfig& cfg, int lambda_index, int amplitude_index,
                       int trial_index);

/// Full campaign: every (lambda, amplitude, trial) combination, run across
/// `jobs` worker threads (0 = hardware concurrency). Results are keyed by
/// index, so the aggregate is independent of execution order.
SweepResult sweep(const ExperimentConfig& cfg, int jobs = 0);

}  // namespace rofdist
