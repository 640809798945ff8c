#include "rofdist/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rofdist {

FrequencyGrid FrequencyGrid::make(double center_hz, double bandwidth_hz, int bins) {
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
    throw std::invalid_argument("FrequencyGrid: bandwidth must be positive and finite");
  if (!std::isfinite(center_hz)) throw std::invalid_argument("FrequencyGrid: center must be finite");
  if (bins < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 bins");
  if (bins % 2 != 0) throw std::invalid_argument("FrequencyGrid: bin count must be even");

  FrequencyGrid grid;
  grid.center_hz_ = center_hz;
  grid.bandwidth_hz_ = bandwidth_hz;
  grid.freqs_hz_.resize(bins);
  const double spacing = bandwidth_hz / bins;
  for (int k = 0; k < bins; ++k) grid.freqs_hz_[k] = -bandwidth_hz / 2.0 + k * spacing;
  return grid;
}

bool FrequencyGrid::compatible(const FrequencyGrid& other) const {
  if (size() != other.size()) return false;
  const auto close = [](double a, double b, double scale) {
    return std::abs(a - b) <= 1e-9 * scale;
  };
  return close(bandwidth_hz_, other.bandwidth_hz_, bandwidth_hz_) &&
         close(center_hz_, other.center_hz_, std::max(std::abs(center_hz_), bandwidth_hz_));
}

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b, const char* where) {
  if (!a.compatible(b))
    throw std::invalid_argument(std::string(where) + ": mixing incompatible frequency grids");
}

}  // namespace rofdist
