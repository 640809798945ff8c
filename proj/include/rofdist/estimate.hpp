#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rofdist/cascade.hpp"
#include "rofdist/channel.hpp"
#include "rofdist/common.hpp"
#include "rofdist/signal.hpp"

namespace rofdist {

/// Search grids for the linear-regime estimator.
struct LinearGridSpec {
  std::vector<int> r_candidates;  // hop-count hypotheses
  dvec tau_grid_s;                // delay hypotheses

  /// r in 1..total_rus, tau from 0 to 10 ns in 0.1 ns steps.
  static LinearGridSpec defaults(int total_rus = 5);
};

/// Search grids and termination controls for the coordinate-descent estimator.
struct NonlinearGridSpec {
  dvec tau_grid_s;      // default 1..10 ns step 1 ns
  dvec amp_grid;        // |A| hypotheses, default 0.1..1.0 step 0.1
  dvec phase_grid_rad;  // default 32 points covering [-pi, pi)
  std::vector<int> r_candidates;  // default 1..total_rus
  double cost_threshold = 1e-9;   // stop once the residual drops this low
  int max_sweeps = 10;

  static NonlinearGridSpec defaults(int total_rus = 5);
};

struct EstimationResult {
  int r_hat = 0;
  double tau_hat_s = 0.0;
  cplx a_hat{0.0, 0.0};
  double cost = 0.0;  // squared residual norm at the returned point
  int sweeps = 0;
  bool converged = false;
  /// Set when distinct hop counts tie for the minimum residual
  /// (e.g. a perfectly flat channel with unit gain).
  bool ambiguous = false;
};

/// Noiseless unit-gain model vector g_k = G^(r+1) e^(-j2pi f_k tau) H_k^r s_k.
cvec model_vector(int hops, double tau_s, const PilotSequence& pilot,
                  const UnitFiberResponse& unit, double gain);

/// Least-squares gain estimate g^H x / ||g||^2, the global minimizer of
/// ||x - A g||^2 over complex A. Throws on a zero model vector.
cplx closed_form_gain(const cvec& model, const cvec& received);

/// Two-dimensional grid search over (r, tau) on the projection residual
/// ||x||^2 - |g^H x|^2 / ||g||^2, with the gain eliminated in closed form.
/// Ties break toward the smallest r, then the smallest tau.
EstimationResult linear_nls(const Frame& received, const LinearGridSpec& spec,
                            const PilotSequence& pilot, const UnitFiberResponse& unit,
                            double gain);

/// Everything needed to rebuild the noiseless nonlinear model signal for a
/// candidate (A, tau, r). Estimation always compares against the noiseless
/// model, whatever noise mode produced the capture.
class NonlinearModelContext {
 public:
  static NonlinearModelContext make(const PilotSequence& pilot, const UnitFiberResponse& unit,
                                    const AmplifierModel& pa, double taps_energy_fraction = 1.0,
                                    StageOptions options = {});

  const FrequencyGrid& grid() const { return grid_; }
  const PilotSequence& pilot() const { return pilot_; }
  const ImpulseTaps& taps() const { return taps_; }
  const AmplifierModel& pa() const { return pa_; }
  const StageOptions& options() const { return options_; }

  /// Time-domain model signal for the candidate parameters: front end,
  /// inverse transform, entry amplifier, then `hops` repeater stages.
  cvec model_time(cplx a, double tau_s, int hops) const;

 private:
  FrequencyGrid grid_;
  PilotSequence pilot_;
  ImpulseTaps taps_;
  AmplifierModel pa_;
  StageOptions options_;
};

/// Squared time-domain residual between the capture and the noiseless model
/// rebuilt at the candidate point.
double nonlinear_cost(cplx a, double tau_s, int hops, const Frame& received,
                      const NonlinearModelContext& ctx);

/// Explicit starting point for a single descent run.
struct CoordinateStart {
  double amp = 0.0;
  double phase_rad = 0.0;
  double tau_s = 0.0;
  int hops = 0;
};

/// Cyclic coordinate descent over (tau, |A|, angle A, r), minimizing
/// nonlinear_cost over one grid at a time with the others held fixed. Each
/// descent stops when the cost reaches cost_threshold, when a full sweep
/// produces no improvement (a coordinate-wise minimum), or at max_sweeps;
/// only the last case reports converged = false. The cost never increases
/// within a descent.
///
/// Without an explicit start, the search descends from a deterministic
/// lattice of starts (every hop hypothesis x four gain-phase quarters, the
/// other coordinates at mid-grid) and keeps the best end point; the delay
/// and phase coordinates couple strongly enough that a lone run can stall
/// in a coordinate-wise minimum. `sweeps` then counts all starts' sweeps.
EstimationResult coordinate_descent(const Frame& received, const NonlinearGridSpec& spec,
                                    const NonlinearModelContext& ctx,
                                    std::optional<CoordinateStart> start = std::nullopt);

/// Exhaustive minimization over the full Cartesian grid; the ground truth for
/// coordinate_descent tests. Throws if the grid has more than max_points.
EstimationResult exhaustive_oracle(const Frame& received, const NonlinearGridSpec& spec,
                                   const NonlinearModelContext& ctx,
                                   std::size_t max_points = 1'000'000);

}  // namespace rofdist
