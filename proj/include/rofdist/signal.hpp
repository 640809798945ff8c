#pragma once

#include <cstdint>

#include "rofdist/common.hpp"
#include "rofdist/grid.hpp"

namespace rofdist {

/// Known unit-modulus QPSK pilot, reproducible from its seed.
struct PilotSequence {
  cvec symbols;
  std::uint64_t seed = 0;
};

/// Symbols drawn uniformly from {(+-1 +- j)/sqrt(2)} by a seeded stream.
PilotSequence generate_pilot(int length, std::uint64_t seed);

/// Wireless hop between the user equipment and the entry radio unit: one
/// complex gain (path gain, antenna gain and phase offset folded together)
/// and one delay (propagation plus clock offset folded together).
struct WirelessFrontEnd {
  cplx gain{1.0, 0.0};  // |gain| > 0
  double delay_s = 0.0;
};

/// One pilot frame on a grid, stored in the frequency domain. The time-domain
/// view is the length-K inverse transform (see to_time / to_freq).
struct Frame {
  FrequencyGrid grid;
  cvec freq;
};

/// Frequency-domain front end: freq_k = gain * exp(-j 2 pi f_k delay) * s_k.
/// The delay acts cyclically on the time view (discrete-frequency model).
Frame apply_front_end(const PilotSequence& pilot, const WirelessFrontEnd& fe,
                      const FrequencyGrid& grid);

/// Mutually inverse transforms, N = K, 1/K scaling on the inverse side.
cvec to_time(const Frame& frame);
Frame to_freq(const cvec& time_samples, const FrequencyGrid& grid);

}  // namespace rofdist
