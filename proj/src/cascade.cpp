#include "rofdist/cascade.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rofdist/dft.hpp"

namespace rofdist {

cplx lambda_from_polar(double scale, double phase_rad) {
  return scale * cplx{std::cos(phase_rad), std::sin(phase_rad)};
}

namespace {

void check_hops(int hops, const CascadeConfig& cfg, const char* where) {
  if (hops < 1 || hops > cfg.total_rus)
    throw std::invalid_argument(std::string(where) + ": hop count out of range [1, M]");
  if (cfg.noise_var < 0.0) throw std::invalid_argument(std::string(where) + ": negative noise variance");
  if (!(cfg.pa.gain > 0.0)) throw std::invalid_argument(std::string(where) + ": amplifier gain must be positive");
}

cvec cubic_distort(const cvec& filtered, const cvec& cubic_input, const AmplifierModel& pa) {
  cvec out(filtered.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const cplx u = cubic_input[n];
    out[n] = pa.gain * (filtered[n] + pa.nonlinearity * u * std::norm(u));
  }
  return out;
}

}  // namespace

cplx pa_apply(cplx x, const AmplifierModel& pa) {
  return pa.gain * (x + pa.nonlinearity * x * std::norm(x));
}

cvec pa_apply(const cvec& x, const AmplifierModel& pa) {
  cvec out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = pa_apply(x[n], pa);
  return out;
}

cvec stage_function(const cvec& x, const ImpulseTaps& taps, const AmplifierModel& pa,
                    const StageOptions& options) {
  if (taps.beta.empty()) throw std::invalid_argument("stage_function: empty tap vector");
  if (taps.beta.size() > x.size())
    throw std::invalid_argument("stage_function: more taps than input samples");

  const bool circular = options.boundary == StageOptions::Boundary::circular;
  const auto filter = [&](const cvec& sig, const cvec& b) {
    return circular ? dft::convolve_circular(sig, b) : dft::convolve_linear(sig, b);
  };

  const cvec filtered = filter(x, taps.beta);
  if (!options.cubic_skips_first_tap) return cubic_distort(filtered, filtered, pa);

  // compatibility variant: the cubic-term sums start at tap l = 1
  cvec tail_taps = taps.beta;
  tail_taps[0] = cplx{0.0, 0.0};
  const cvec tail_filtered = filter(x, tail_taps);
  return cubic_distort(filtered, tail_filtered, pa);
}

cvec add_awgn(const cvec& x, double var, Rng& rng) {
  if (var < 0.0) throw std::invalid_argument("add_awgn: negative variance");
  cvec out = x;
  if (var == 0.0) return out;
  for (auto& v : out) v += rng.complex_gaussian(var);
  return out;
}

Frame propagate_linear(const Frame& x0, int hops, const CascadeConfig& cfg) {
  check_hops(hops, cfg, "propagate_linear");
  require_same_grid(x0.grid, cfg.unit.grid(), "propagate_linear");

  Rng rng(mix_seed(cfg.seed, 0x11aea5));
  const bool per_stage = cfg.noise_mode == NoiseMode::per_stage && cfg.noise_var > 0.0;
  const double g = cfg.pa.gain;

  cvec x(x0.freq.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = g * x0.freq[k];
  if (per_stage) x = add_awgn(x, cfg.noise_var, rng);

  for (int stage = 0; stage < hops; ++stage) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= g * cfg.unit.response()[k];
    if (per_stage) x = add_awgn(x, cfg.noise_var, rng);
  }
  if (!per_stage && cfg.noise_mode == NoiseMode::aggregate_at_cu && cfg.noise_var > 0.0)
    x = add_awgn(x, cfg.noise_var, rng);
  return Frame{x0.grid, std::move(x)};
}

Frame propagate_nonlinear(const Frame& x0, int hops, const CascadeConfig& cfg) {
  check_hops(hops, cfg, "propagate_nonlinear");
  require_same_grid(x0.grid, cfg.unit.grid(), "propagate_nonlinear");
  if (cfg.stage.boundary != StageOptions::Boundary::circular)
    throw std::invalid_argument("propagate_nonlinear: cascade requires circular boundary handling");

  Rng rng(mix_seed(cfg.seed, 0x11aea5));
  const bool per_stage = cfg.noise_mode == NoiseMode::per_stage && cfg.noise_var > 0.0;
  const ImpulseTaps taps = impulse_taps(cfg.unit, cfg.taps_energy_fraction);

  cvec x = pa_apply(to_time(x0), cfg.pa);
  if (per_stage) x = add_awgn(x, cfg.noise_var, rng);
  for (int stage = 0; stage < hops; ++stage) {
    x = stage_function(x, taps, cfg.pa, cfg.stage);
    if (per_stage) x = add_awgn(x, cfg.noise_var, rng);
  }
  if (!per_stage && cfg.noise_mode == NoiseMode::aggregate_at_cu && cfg.noise_var > 0.0)
    x = add_awgn(x, cfg.noise_var, rng);
  return to_freq(x, x0.grid);
}

}  // namespace rofdist
