#pragma once

#include <cstdint>

#include "rofdist/channel.hpp"
#include "rofdist/common.hpp"
#include "rofdist/rng.hpp"
#include "rofdist/signal.hpp"

namespace rofdist {

/// Memoryless third-order power amplifier: y = G (x + lambda x |x|^2).
/// gain is a linear amplitude scale; lambda = 0 is the linear regime.
struct AmplifierModel {
  double gain = 1.0;
  cplx nonlinearity{0.0, 0.0};
};

/// lambda = scale * exp(j phase), the usual way these factors are quoted.
cplx lambda_from_polar(double scale, double phase_rad);

/// Where noise enters the cascade. per_stage injects an independent draw after
/// every radio-unit output (the physical reading); aggregate_at_cu adds a
/// single draw to the final noiseless signal at the central unit (the reading
/// used by the estimation equations).
enum class NoiseMode { per_stage, aggregate_at_cu };

struct StageOptions {
  /// Compatibility variant: the cubic-term sums start at tap l = 1 instead
  /// of l = 0. Off by default: the amplifier distorts its actual input,
  /// which includes the first tap.
  bool cubic_skips_first_tap = false;

  enum class Boundary {
    circular,     // consistent with the discrete-frequency model
    linear_tail,  // plain convolution, output grows by L-1 samples
  };
  Boundary boundary = Boundary::circular;
};

struct CascadeConfig {
  int total_rus = 5;  // M
  UnitFiberResponse unit;
  AmplifierModel pa;
  double noise_var = 0.0;  // sigma^2 per complex sample
  NoiseMode noise_mode = NoiseMode::per_stage;
  std::uint64_t seed = 0;
  StageOptions stage{};
  /// Energy fraction for the time-domain tap truncation; 1.0 keeps all taps
  /// so that convolution and frequency-domain powers agree exactly.
  double taps_energy_fraction = 1.0;
};

cplx pa_apply(cplx x, const AmplifierModel& pa);
cvec pa_apply(const cvec& x, const AmplifierModel& pa);

/// One repeater stage: dispersion then amplifier, y = G(u + lambda u |u|^2)
/// with u the tap-filtered input. The filtered signal is computed once and
/// reused in both terms unless cubic_skips_first_tap is set.
cvec stage_function(const cvec& x, const ImpulseTaps& taps, const AmplifierModel& pa,
                    const StageOptions& options = {});

/// Adds independent CN(0, var) samples; deterministic per rng state.
cvec add_awgn(const cvec& x, double var, Rng& rng);

/// Frequency-domain cascade with amplifiers in the linear regime (lambda is
/// ignored): noiseless part G^(hops+1) * H_k^hops * x0_k, noise injected per
/// noise_mode. Requires 1 <= hops <= total_rus.
Frame propagate_linear(const Frame& x0, int hops, const CascadeConfig& cfg);

/// Time-domain cascade with the full nonlinearity: entry amplifier applied to
/// the time view of x0, then `hops` repeater stages, noise per noise_mode.
/// Requires 1 <= hops <= total_rus and circular boundary handling.
Frame propagate_nonlinear(const Frame& x0, int hops, const CascadeConfig& cfg);

}  // namespace rofdist
