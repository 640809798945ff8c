#include "rofdist/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rofdist/dft.hpp"

namespace rofdist {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_sorted_positive_hops(const std::vector<int>& hops, const char* where) {
  if (hops.empty()) throw std::invalid_argument(std::string(where) + ": empty hop-count grid");
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] < 1) throw std::invalid_argument(std::string(where) + ": hop candidates must be >= 1");
    if (i > 0 && hops[i] <= hops[i - 1])
      throw std::invalid_argument(std::string(where) + ": hop candidates must be strictly increasing");
  }
}

double squared_norm(const cvec& x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  return acc;
}

}  // namespace

LinearGridSpec LinearGridSpec::defaults(int total_rus) {
  LinearGridSpec spec;
  for (int r = 1; r <= total_rus; ++r) spec.r_candidates.push_back(r);
  for (int i = 0; i <= 100; ++i) spec.tau_grid_s.push_back(i * 0.1e-9);
  return spec;
}

NonlinearGridSpec NonlinearGridSpec::defaults(int total_rus) {
  NonlinearGridSpec spec;
  for (int i = 1; i <= 10; ++i) spec.tau_grid_s.push_back(i * 1e-9);
  for (int i = 1; i <= 10; ++i) spec.amp_grid.push_back(i * 0.1);
  const int phase_points = 32;
  for (int i = 0; i < phase_points; ++i)
    spec.phase_grid_rad.push_back(-pi + i * (2.0 * pi / phase_points));
  for (int r = 1; r <= total_rus; ++r) spec.r_candidates.push_back(r);
  return spec;
}

cvec model_vector(int hops, double tau_s, const PilotSequence& pilot,
                  const UnitFiberResponse& unit, double gain) {
  if (hops < 1) throw std::invalid_argument("model_vector: hop count must be >= 1");
  if (!(gain > 0.0)) throw std::invalid_argument("model_vector: gain must be positive");
  const FrequencyGrid& grid = unit.grid();
  if (pilot.symbols.size() != static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("model_vector: pilot length does not match grid");

  const double gain_pow = std::pow(gain, hops + 1);
  cvec g(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    cplx h_pow{1.0, 0.0};
    for (int i = 0; i < hops; ++i) h_pow *= unit.response()[k];
    const double phi = -2.0 * pi * grid.freq_hz(k) * tau_s;
    g[k] = gain_pow * cplx{std::cos(phi), std::sin(phi)} * h_pow * pilot.symbols[k];
  }
  return g;
}

cplx closed_form_gain(const cvec& model, const cvec& received) {
  if (model.size() != received.size())
    throw std::invalid_argument("closed_form_gain: length mismatch");
  cplx inner{0.0, 0.0};
  double norm2 = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    inner += std::conj(model[k]) * received[k];
    norm2 += std::norm(model[k]);
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("closed_form_gain: zero model vector");
  return inner / norm2;
}

EstimationResult linear_nls(const Frame& received, const LinearGridSpec& spec,
                            const PilotSequence& pilot, const UnitFiberResponse& unit,
                            double gain) {
  check_sorted_positive_hops(spec.r_candidates, "linear_nls");
  if (spec.tau_grid_s.empty()) throw std::invalid_argument("linear_nls: empty delay grid");
  if (!(gain > 0.0)) throw std::invalid_argument("linear_nls: gain must be positive");
  const FrequencyGrid& grid = unit.grid();
  require_same_grid(received.grid, grid, "linear_nls");
  if (pilot.symbols.size() != static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("linear_nls: pilot length does not match grid");

  const int bins = grid.size();
  const double rx_energy = squared_norm(received.freq);
  if (!(rx_energy > 0.0)) throw std::invalid_argument("linear_nls: all-zero received frame");

  // conj(e^{-j2pi f tau}) per (tau, bin), shared across hop hypotheses
  const std::size_t n_tau = spec.tau_grid_s.size();
  cvec tau_phases(n_tau * bins);
  for (std::size_t t = 0; t < n_tau; ++t) {
    for (int k = 0; k < bins; ++k) {
      const double phi = 2.0 * pi * grid.freq_hz(k) * spec.tau_grid_s[t];
      tau_phases[t * bins + k] = cplx{std::cos(phi), std::sin(phi)};
    }
  }

  double best_cost = std::numeric_limits<double>::infinity();
  int best_r = spec.r_candidates.front();
  std::size_t best_tau_idx = 0;
  dvec best_cost_per_r(spec.r_candidates.size(), std::numeric_limits<double>::infinity());

  // h_pow tracks H^r across the sorted candidates
  cvec h_pow(bins, cplx{1.0, 0.0});
  int current_power = 0;
  cvec base(bins);
  for (std::size_t ri = 0; ri < spec.r_candidates.size(); ++ri) {
    const int r = spec.r_candidates[ri];
    for (; current_power < r; ++current_power)
      for (int k = 0; k < bins; ++k) h_pow[k] *= unit.response()[k];

    double base_energy = 0.0;
    for (int k = 0; k < bins; ++k) {
      base[k] = h_pow[k] * pilot.symbols[k];
      base_energy += std::norm(base[k]);
    }
    // the gain factor G^(r+1) cancels inside |g^H x|^2 / ||g||^2
    for (std::size_t t = 0; t < n_tau; ++t) {
      cplx corr{0.0, 0.0};
      const cplx* phase_row = &tau_phases[t * bins];
      for (int k = 0; k < bins; ++k) corr += std::conj(base[k]) * phase_row[k] * received.freq[k];
      const double cost = rx_energy - std::norm(corr) / base_energy;
      if (cost < best_cost_per_r[ri]) best_cost_per_r[ri] = cost;
      if (cost < best_cost) {
        best_cost = cost;
        best_r = r;
        best_tau_idx = t;
      }
    }
  }

  EstimationResult result;
  result.r_hat = best_r;
  result.tau_hat_s = spec.tau_grid_s[best_tau_idx];
  const cvec g = model_vector(best_r, result.tau_hat_s, pilot, unit, gain);
  result.a_hat = closed_form_gain(g, received.freq);
  result.cost = std::max(0.0, best_cost);
  result.sweeps = 1;
  result.converged = true;

  const double tie_tol = 1e-9 * rx_energy;
  for (std::size_t ri = 0; ri < spec.r_candidates.size(); ++ri) {
    if (spec.r_candidates[ri] != best_r && best_cost_per_r[ri] <= best_cost + tie_tol)
      result.ambiguous = true;
  }
  return result;
}

NonlinearModelContext NonlinearModelContext::make(const PilotSequence& pilot,
                                                  const UnitFiberResponse& unit,
                                                  const AmplifierModel& pa,
                                                  double taps_energy_fraction,
                                                  StageOptions options) {
  if (pilot.symbols.size() != static_cast<std::size_t>(unit.grid().size()))
    throw std::invalid_argument("NonlinearModelContext: pilot length does not match grid");
  if (!(pa.gain > 0.0)) throw std::invalid_argument("NonlinearModelContext: gain must be positive");
  NonlinearModelContext ctx;
  ctx.grid_ = unit.grid();
  ctx.pilot_ = pilot;
  ctx.taps_ = impulse_taps(unit, taps_energy_fraction);
  ctx.pa_ = pa;
  ctx.options_ = options;
  return ctx;
}

cvec NonlinearModelContext::model_time(cplx a, double tau_s, int hops) const {
  if (hops < 1) throw std::invalid_argument("model_time: hop count must be >= 1");
  Frame x0{grid_, cvec(grid_.size())};
  for (int k = 0; k < grid_.size(); ++k) {
    const double phi = -2.0 * pi * grid_.freq_hz(k) * tau_s;
    x0.freq[k] = a * cplx{std::cos(phi), std::sin(phi)} * pilot_.symbols[k];
  }
  cvec x = pa_apply(to_time(x0), pa_);
  for (int stage = 0; stage < hops; ++stage) x = stage_function(x, taps_, pa_, options_);
  return x;
}

double nonlinear_cost(cplx a, double tau_s, int hops, const Frame& received,
                      const NonlinearModelContext& ctx) {
  require_same_grid(received.grid, ctx.grid(), "nonlinear_cost");
  const cvec rx = to_time(received);
  const cvec model = ctx.model_time(a, tau_s, hops);
  double acc = 0.0;
  for (std::size_t n = 0; n < rx.size(); ++n) acc += std::norm(rx[n] - model[n]);
  return acc;
}

namespace {

// Shared grid-point evaluator for the descent and the exhaustive search.
// Semantically identical to nonlinear_cost; caches the received time view,
// the tap spectrum, and the front-end base for the current delay, and walks
// the repeater chain once per (A, tau) to price every hop hypothesis.
class CandidateEvaluator {
 public:
  CandidateEvaluator(const Frame& received, const NonlinearModelContext& ctx)
      : ctx_(ctx), rx_time_(to_time(received)), bins_(ctx.grid().size()) {
    require_same_grid(received.grid, ctx.grid(), "CandidateEvaluator");
    fast_ = is_pow2(static_cast<std::size_t>(bins_)) &&
            ctx.options().boundary == StageOptions::Boundary::circular;
    if (fast_) {
      cvec padded(bins_, cplx{0.0, 0.0});
      std::copy(ctx.taps().beta.begin(), ctx.taps().beta.end(), padded.begin());
      taps_spectrum_ = dft::forward_std(padded);
      if (ctx.options().cubic_skips_first_tap) {
        padded.assign(bins_, cplx{0.0, 0.0});
        std::copy(ctx.taps().beta.begin() + 1, ctx.taps().beta.end(), padded.begin() + 1);
        tail_spectrum_ = dft::forward_std(padded);
      }
    }
    base_.resize(bins_);
    chain_.resize(bins_);
    scratch_.resize(bins_);
    scratch2_.resize(bins_);
  }

  /// Residual cost at one candidate point.
  double cost(double amp, double phase_rad, double tau_s, int hops) {
    single_hop_.assign(1, hops);
    costs_over_hops(amp, phase_rad, tau_s, single_hop_, single_out_);
    return single_out_[0];
  }

  /// Residual costs for every hop candidate (sorted ascending) at fixed
  /// (amplitude, phase, delay); walks the repeater chain once.
  void costs_over_hops(double amp, double phase_rad, double tau_s, const std::vector<int>& hops,
                       dvec& out) {
    prepare_base(tau_s);
    const cplx a = std::polar(amp, phase_rad);
    for (int n = 0; n < bins_; ++n) {
      const cplx x = a * base_[n];
      chain_[n] = ctx_.pa().gain * (x + ctx_.pa().nonlinearity * x * std::norm(x));
    }
    out.resize(hops.size());
    int done = 0;
    std::size_t next = 0;
    const int max_hops = hops.back();
    while (done < max_hops) {
      advance_stage();
      ++done;
      if (next < hops.size() && hops[next] == done) {
        double acc = 0.0;
        for (int n = 0; n < bins_; ++n) acc += std::norm(rx_time_[n] - chain_[n]);
        out[next++] = acc;
      }
    }
  }

 private:
  void prepare_base(double tau_s) {
    if (has_base_ && tau_s == base_tau_) return;
    Frame unit_gain{ctx_.grid(), cvec(bins_)};
    for (int k = 0; k < bins_; ++k) {
      const double phi = -2.0 * pi * ctx_.grid().freq_hz(k) * tau_s;
      unit_gain.freq[k] = cplx{std::cos(phi), std::sin(phi)} * ctx_.pilot().symbols[k];
    }
    base_ = to_time(unit_gain);
    base_tau_ = tau_s;
    has_base_ = true;
  }

  void advance_stage() {
    if (!fast_) {
      chain_ = stage_function(chain_, ctx_.taps(), ctx_.pa(), ctx_.options());
      return;
    }
    scratch_ = chain_;
    dft::forward_std_inplace(scratch_);
    if (ctx_.options().cubic_skips_first_tap) {
      scratch2_ = scratch_;
      for (int k = 0; k < bins_; ++k) scratch2_[k] *= tail_spectrum_[k];
      dft::inverse_std_inplace(scratch2_);
    }
    for (int k = 0; k < bins_; ++k) scratch_[k] *= taps_spectrum_[k];
    dft::inverse_std_inplace(scratch_);
    const AmplifierModel& pa = ctx_.pa();
    if (ctx_.options().cubic_skips_first_tap) {
      for (int n = 0; n < bins_; ++n)
        chain_[n] = pa.gain * (scratch_[n] + pa.nonlinearity * scratch2_[n] * std::norm(scratch2_[n]));
    } else {
      for (int n = 0; n < bins_; ++n)
        chain_[n] = pa.gain * (scratch_[n] + pa.nonlinearity * scratch_[n] * std::norm(scratch_[n]));
    }
  }

  const NonlinearModelContext& ctx_;

  cvec rx_time_;
  std::vector<int> single_hop_;
  dvec single_out_;
  int bins_ = 0;
  bool fast_ = false;
  cvec taps_spectrum_;
  cvec tail_spectrum_;
  cvec base_;
  cvec chain_;
  cvec scratch_;
  cvec scratch2_;
  double base_tau_ = 0.0;
  bool has_base_ = false;
};

void check_nonlinear_spec(const NonlinearGridSpec& spec, const char* where) {
  check_sorted_positive_hops(spec.r_candidates, where);
  if (spec.tau_grid_s.empty() || spec.amp_grid.empty() || spec.phase_grid_rad.empty())
    throw std::invalid_argument(std::string(where) + ": empty search grid");
  for (double a : spec.amp_grid)
    if (!(a > 0.0)) throw std::invalid_argument(std::string(where) + ": amplitudes must be positive");
  if (!(spec.cost_threshold > 0.0))
    throw std::invalid_argument(std::string(where) + ": cost threshold must be positive");
  if (spec.max_sweeps < 1) throw std::invalid_argument(std::string(where) + ": max_sweeps must be >= 1");
}

}  // namespace

namespace {

struct DescentOutcome {
  double amp = 0.0;
  double phase = 0.0;
  double tau = 0.0;
  int hops = 0;
  double cost = 0.0;
  int sweeps = 0;
  bool reached_threshold = false;
  bool stalled = false;
};

// One descent from one starting point; the cost never increases.
DescentOutcome descend(CandidateEvaluator& eval, const NonlinearGridSpec& spec,
                       const CoordinateStart& start) {
  DescentOutcome s;
  s.amp = start.amp;
  s.phase = start.phase_rad;
  s.tau = start.tau_s;
  s.hops = start.hops;
  s.cost = eval.cost(s.amp, s.phase, s.tau, s.hops);
  s.reached_threshold = s.cost <= spec.cost_threshold;
  dvec hop_costs;

  while (!s.reached_threshold && s.sweeps < spec.max_sweeps) {
    ++s.sweeps;
    bool improved = false;

    for (double candidate : spec.tau_grid_s) {
      const double c = eval.cost(s.amp, s.phase, candidate, s.hops);
      if (c < s.cost) {
        s.cost = c;
        s.tau = candidate;
        improved = true;
      }
    }
    for (double candidate : spec.amp_grid) {
      const double c = eval.cost(candidate, s.phase, s.tau, s.hops);
      if (c < s.cost) {
        s.cost = c;
        s.amp = candidate;
        improved = true;
      }
    }
    for (double candidate : spec.phase_grid_rad) {
      const double c = eval.cost(s.amp, candidate, s.tau, s.hops);
      if (c < s.cost) {
        s.cost = c;
        s.phase = candidate;
        improved = true;
      }
    }
    eval.costs_over_hops(s.amp, s.phase, s.tau, spec.r_candidates, hop_costs);
    for (std::size_t i = 0; i < spec.r_candidates.size(); ++i) {
      if (hop_costs[i] < s.cost) {
        s.cost = hop_costs[i];
        s.hops = spec.r_candidates[i];
        improved = true;
      }
    }

    if (s.cost <= spec.cost_threshold) {
      s.reached_threshold = true;
      break;
    }
    if (!improved) {
      s.stalled = true;
      break;
    }
  }
  if (s.sweeps == 0) s.sweeps = 1;  // threshold met at the start point
  return s;
}

}  // namespace

EstimationResult coordinate_descent(const Frame& received, const NonlinearGridSpec& spec,
                                    const NonlinearModelContext& ctx,
                                    std::optional<CoordinateStart> start) {
  check_nonlinear_spec(spec, "coordinate_descent");
  CandidateEvaluator eval(received, ctx);

  // An explicit start runs a single descent. Otherwise descend from a small
  // deterministic lattice of starts -- every hop hypothesis crossed with four
  // gain-phase quarters -- because the delay and phase coordinates couple
  // strongly enough to trap a single run in a coordinate-wise minimum.
  // Early-exits as soon as one descent reaches the cost threshold.
  std::vector<CoordinateStart> starts;
  if (start) {
    starts.push_back(*start);
  } else {
    const double amp0 = spec.amp_grid[spec.amp_grid.size() / 2];
    const double tau0 = spec.tau_grid_s[spec.tau_grid_s.size() / 2];
    const std::size_t n_phase = spec.phase_grid_rad.size();
    const std::size_t phase_step = std::max<std::size_t>(1, n_phase / 4);
    for (int hops : spec.r_candidates)
      for (std::size_t p = 0; p < n_phase; p += phase_step)
        starts.push_back(CoordinateStart{amp0, spec.phase_grid_rad[p], tau0, hops});
  }

  DescentOutcome best;
  best.cost = std::numeric_limits<double>::infinity();
  int total_sweeps = 0;
  for (const CoordinateStart& s : starts) {
    const DescentOutcome outcome = descend(eval, spec, s);
    total_sweeps += outcome.sweeps;
    if (outcome.cost < best.cost) best = outcome;
    if (best.reached_threshold) break;
  }

  EstimationResult result;
  result.r_hat = best.hops;
  result.tau_hat_s = best.tau;
  result.a_hat = std::polar(best.amp, best.phase);
  // report the cost through the plain evaluation path, so re-evaluating the
  // returned point reproduces it exactly
  result.cost = nonlinear_cost(result.a_hat, best.tau, best.hops, received, ctx);
  result.sweeps = total_sweeps;
  result.converged = best.reached_threshold || best.stalled;
  return result;
}

EstimationResult exhaustive_oracle(const Frame& received, const NonlinearGridSpec& spec,
                                   const NonlinearModelContext& ctx, std::size_t max_points) {
  check_nonlinear_spec(spec, "exhaustive_oracle");
  const std::size_t points = spec.tau_grid_s.size() * spec.amp_grid.size() *
                             spec.phase_grid_rad.size() * spec.r_candidates.size();
  if (points > max_points)
    throw std::invalid_argument("exhaustive_oracle: grid larger than the configured cap");

  CandidateEvaluator eval(received, ctx);
  double best_cost = std::numeric_limits<double>::infinity();
  double best_amp = spec.amp_grid.front();
  double best_phase = spec.phase_grid_rad.front();
  double best_tau = spec.tau_grid_s.front();
  int best_hops = spec.r_candidates.front();
  dvec hop_costs;

  for (double tau : spec.tau_grid_s) {
    for (double amp : spec.amp_grid) {
      for (double phase : spec.phase_grid_rad) {
        eval.costs_over_hops(amp, phase, tau, spec.r_candidates, hop_costs);
        for (std::size_t i = 0; i < spec.r_candidates.size(); ++i) {
          if (hop_costs[i] < best_cost) {
            best_cost = hop_costs[i];
            best_amp = amp;
            best_phase = phase;
            best_tau = tau;
            best_hops = spec.r_candidates[i];
          }
        }
      }
    }
  }

  EstimationResult result;
  result.r_hat = best_hops;
  result.tau_hat_s = best_tau;
  result.a_hat = std::polar(best_amp, best_phase);
  result.cost = nonlinear_cost(result.a_hat, best_tau, best_hops, received, ctx);
  result.sweeps = 1;
  result.converged = true;
  return result;
}

}  // namespace rofdist
