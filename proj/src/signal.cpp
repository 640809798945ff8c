#include "rofdist/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "rofdist/dft.hpp"
#include "rofdist/rng.hpp"

namespace rofdist {

PilotSequence generate_pilot(int length, std::uint64_t seed) {
  if (length < 2) throw std::invalid_argument("generate_pilot: need at least 2 symbols");
  static const cplx constellation[4] = {
      {M_SQRT1_2, M_SQRT1_2}, {M_SQRT1_2, -M_SQRT1_2}, {-M_SQRT1_2, M_SQRT1_2}, {-M_SQRT1_2, -M_SQRT1_2}};
  PilotSequence pilot;
  pilot.seed = seed;
  pilot.symbols.resize(length);
  Rng rng(mix_seed(seed, 0x51a07));
  for (int k = 0; k < length; ++k) pilot.symbols[k] = constellation[rng.uniform_int(0, 3)];
  return pilot;
}

Frame apply_front_end(const PilotSequence& pilot, const WirelessFrontEnd& fe,
                      const FrequencyGrid& grid) {
  if (static_cast<int>(pilot.symbols.size()) != grid.size())
    throw std::invalid_argument("apply_front_end: pilot length does not match grid");
  if (!(std::abs(fe.gain) > 0.0))
    throw std::invalid_argument("apply_front_end: front-end gain must be nonzero");
  if (!std::isfinite(fe.delay_s))
    throw std::invalid_argument("apply_front_end: delay must be finite");

  Frame frame{grid, cvec(grid.size())};
  for (int k = 0; k < grid.size(); ++k) {
    const double phi = -2.0 * pi * grid.freq_hz(k) * fe.delay_s;
    frame.freq[k] = fe.gain * cplx{std::cos(phi), std::sin(phi)} * pilot.symbols[k];
  }
  return frame;
}

cvec to_time(const Frame& frame) {
  if (static_cast<int>(frame.freq.size()) != frame.grid.size())
    throw std::invalid_argument("to_time: frame length does not match its grid");
  return dft::inverse(frame.freq);
}

Frame to_freq(const cvec& time_samples, const FrequencyGrid& grid) {
  if (static_cast<int>(time_samples.size()) != grid.size())
    throw std::invalid_argument("to_freq: sample count does not match grid");
  return Frame{grid, dft::forward(time_samples)};
}

}  // namespace rofdist
