#pragma once

#include <vector>

#include "rofdist/common.hpp"

namespace rofdist {

/// Discrete frequency grid shared by every signal and channel response of one
/// experiment. The K bin frequencies are baseband-equivalent offsets spanning
/// [-B/2, B/2); the absolute carrier position is kept in center_hz so that
/// measurement tables (given in absolute Hz) can be mapped onto the grid.
/// K must be even so the half-band offset folds into a (-1)^n time modulation.
class FrequencyGrid {
 public:
  /// Default-constructed grids are empty placeholders; build real ones with make().
  FrequencyGrid() = default;

  static FrequencyGrid make(double center_hz, double bandwidth_hz, int bins);

  int size() const { return static_cast<int>(freqs_hz_.size()); }
  double center_hz() const { return center_hz_; }
  double bandwidth_hz() const { return bandwidth_hz_; }
  double spacing_hz() const { return bandwidth_hz_ / size(); }
  double sample_interval_s() const { return 1.0 / bandwidth_hz_; }

  /// Baseband offset of bin k, f_k = -B/2 + k*B/K.
  double freq_hz(int k) const { return freqs_hz_[k]; }
  const dvec& freqs_hz() const { return freqs_hz_; }
  double absolute_hz(int k) const { return center_hz_ + freqs_hz_[k]; }

  /// Same (center, bandwidth, K) up to rounding; mixing incompatible grids is
  /// an error everywhere in the library.
  bool compatible(const FrequencyGrid& other) const;

 private:
  double center_hz_ = 0.0;
  double bandwidth_hz_ = 0.0;
  dvec freqs_hz_;
};

/// Throws std::invalid_argument unless the two grids are compatible.
void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b, const char* where);

}  // namespace rofdist
