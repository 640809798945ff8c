#pragma once

#include <string>
#include <vector>

#include "rofdist/common.hpp"
#include "rofdist/grid.hpp"

namespace rofdist {

/// Complex frequency response of a one-unit-length fiber segment on a grid.
/// Every entry must be finite and nonzero in magnitude (a zero bin would make
/// the hop count unidentifiable there).
class UnitFiberResponse {
 public:
  UnitFiberResponse() = default;  // empty placeholder, build real ones with make()

  static UnitFiberResponse make(FrequencyGrid grid, cvec response);

  const FrequencyGrid& grid() const { return grid_; }
  const cvec& response() const { return response_; }

  dvec magnitude() const;
  dvec phase_rad() const;

 private:
  FrequencyGrid grid_;
  cvec response_;
};

struct MeasurementRow {
  double freq_hz = 0.0;       // absolute frequency
  double magnitude_db = 0.0;  // |H| in dB (typically <= 0 for a passive fiber)
  double group_delay_s = 0.0;
};

/// Raw per-frequency fiber measurement: magnitude and group delay rows,
/// strictly increasing in frequency, at least 8 rows, finite values.
class MeasurementTable {
 public:
  MeasurementTable() = default;

  static MeasurementTable from_rows(std::vector<MeasurementRow> rows);

  const std::vector<MeasurementRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  double min_freq_hz() const { return rows_.front().freq_hz; }
  double max_freq_hz() const { return rows_.back().freq_hz; }

 private:
  std::vector<MeasurementRow> rows_;
};

/// Stand-in for a measured fiber: linear attenuation ramp across the band and
/// a linear group-delay profile. The defaults are calibrated so the worst-case
/// attenuation of one unit length is 2.4 dB.
struct SyntheticFiberParams {
  double atten_low_db = 1.4;               // attenuation at band start, >= 0
  double atten_high_db = 2.4;              // attenuation at band end, >= 0
  double mean_group_delay_s = 5e-9;        // > 0
  double group_delay_slope_s_per_hz = 5e-19;  // 0.5 ns/GHz dispersion term
};

/// Time-domain taps of a unit fiber segment, possibly truncated.
/// truncation_loss = 1 - (energy kept / total inverse-transform energy).
struct ImpulseTaps {
  cvec beta;
  double sample_interval_s = 0.0;
  double truncation_loss = 0.0;
};

/// Centered moving average with an odd window; edge samples use symmetrically
/// shrunk windows, so linear data is preserved exactly everywhere.
/// Window 1 is the identity.
dvec moving_average(const dvec& values, int window);

/// Phase from group delay by cumulative trapezoidal integration over the grid:
/// phi_0 = 0, phi_k = phi_{k-1} - 2 pi * df * (tg_{k-1} + tg_k) / 2.
/// Exact for group delay polynomial in f of degree <= 1. Any constant phase
/// reference folds into the front-end gain downstream.
dvec phase_from_group_delay(const dvec& group_delay_s, double spacing_hz);

/// Build a unit response from measured magnitude/group-delay rows: smooth both
/// columns with the odd moving-average window, resample onto the grid's
/// absolute frequencies by linear interpolation, integrate the group delay
/// into phase, and combine as |H| * exp(j phi).
/// Throws if the table does not cover the grid's absolute span, or if the
/// window is even or larger than the row count.
UnitFiberResponse ingest_measurement(const MeasurementTable& table, const FrequencyGrid& grid,
                                     int smooth_window);

/// Synthesize a unit response from SyntheticFiberParams: the magnitude in dB
/// ramps linearly from -atten_low to -atten_high across the band, the group
/// delay is mean + slope * (f_k - band midpoint), and the phase comes from the
/// same integration used by ingest_measurement.
UnitFiberResponse synth_channel(const SyntheticFiberParams& params, const FrequencyGrid& grid);

/// Frequency response of `hops` cascaded unit segments: H_k^hops elementwise.
/// hops = 0 yields the all-ones vector.
cvec cascade_response(const UnitFiberResponse& unit, int hops);

/// Inverse-transform the response and truncate to the shortest tap prefix
/// holding at least energy_fraction of the total energy.
ImpulseTaps impulse_taps(const UnitFiberResponse& unit, double energy_fraction);

/// Forward transform of (zero-padded) taps back onto the grid.
cvec taps_to_response(const ImpulseTaps& taps, const FrequencyGrid& grid);

}  // namespace rofdist
