#include "rofdist/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rofdist/dft.hpp"

namespace rofdist {

UnitFiberResponse UnitFiberResponse::make(FrequencyGrid grid, cvec response) {
  if (static_cast<int>(response.size()) != grid.size())
    throw std::invalid_argument("UnitFiberResponse: response length does not match grid");
  for (const cplx& h : response) {
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
      throw std::invalid_argument("UnitFiberResponse: non-finite entry");
    if (std::abs(h) <= 0.0)
      throw std::invalid_argument("UnitFiberResponse: zero-magnitude bin makes the hop count unidentifiable");
  }
  UnitFiberResponse unit;
  unit.grid_ = std::move(grid);
  unit.response_ = std::move(response);
  return unit;
}

dvec UnitFiberResponse::magnitude() const {
  dvec mag(response_.size());
  std::transform(response_.begin(), response_.end(), mag.begin(),
                 [](const cplx& h) { return std::abs(h); });
  return mag;
}

dvec UnitFiberResponse::phase_rad() const {
  dvec phase(response_.size());
  std::transform(response_.begin(), response_.end(), phase.begin(),
                 [](const cplx& h) { return std::arg(h); });
  return phase;
}

MeasurementTable MeasurementTable::from_rows(std::vector<MeasurementRow> rows) {
  if (rows.size() < 8) throw std::invalid_argument("MeasurementTable: need at least 8 rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const MeasurementRow& r = rows[i];
    if (!std::isfinite(r.freq_hz) || !std::isfinite(r.magnitude_db) || !std::isfinite(r.group_delay_s))
      throw std::invalid_argument("MeasurementTable: non-finite row");
    if (i > 0 && !(rows[i - 1].freq_hz < r.freq_hz))
      throw std::invalid_argument("MeasurementTable: frequencies must be strictly increasing");
  }
  MeasurementTable table;
  table.rows_ = std::move(rows);
  return table;
}

dvec moving_average(const dvec& values, int window) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("moving_average: window must be odd and positive");
  const int n = static_cast<int>(values.size());
  if (window > n) throw std::invalid_argument("moving_average: window larger than data");
  dvec out(values.size());
  const int half = window / 2;
  for (int i = 0; i < n; ++i) {
    // shrink symmetrically at the edges so linear trends stay unbiased
    const int h = std::min({half, i, n - 1 - i});
    double acc = 0.0;
    for (int j = i - h; j <= i + h; ++j) acc += values[j];
    out[i] = acc / (2 * h + 1);
  }
  return out;
}

dvec phase_from_group_delay(const dvec& group_delay_s, double spacing_hz) {
  dvec phase(group_delay_s.size());
  if (group_delay_s.empty()) return phase;
  phase[0] = 0.0;
  for (std::size_t k = 1; k < group_delay_s.size(); ++k) {
    const double segment = 0.5 * (group_delay_s[k - 1] + group_delay_s[k]) * spacing_hz;
    phase[k] = phase[k - 1] - 2.0 * pi * segment;
  }
  return phase;
}

namespace {

// Linear interpolation of tabulated (x, y) at query points; x strictly increasing.
dvec interp_linear(const dvec& x, const dvec& y, const dvec& queries) {
  dvec out(queries.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double q = queries[i];
    while (seg + 2 < x.size() && x[seg + 1] < q) ++seg;
    const double t = (q - x[seg]) / (x[seg + 1] - x[seg]);
    out[i] = y[seg] + t * (y[seg + 1] - y[seg]);
  }
  return out;
}

cvec combine_magnitude_phase(const dvec& magnitude_db, const dvec& phase_rad) {
  cvec response(magnitude_db.size());
  for (std::size_t k = 0; k < response.size(); ++k) {
    const double mag = std::pow(10.0, magnitude_db[k] / 20.0);
    response[k] = std::polar(mag, phase_rad[k]);
  }
  return response;
}

}  // namespace

UnitFiberResponse ingest_measurement(const MeasurementTable& table, const FrequencyGrid& grid,
                                     int smooth_window) {
  if (smooth_window < 1 || smooth_window % 2 == 0)
    throw std::invalid_argument("ingest_measurement: smoothing window must be odd");
  if (smooth_window > static_cast<int>(table.size()))
    throw std::invalid_argument("ingest_measurement: smoothing window exceeds row count");

  const int bins = grid.size();
  dvec grid_abs(bins);
  for (int k = 0; k < bins; ++k) grid_abs[k] = grid.absolute_hz(k);
  if (grid_abs.front() < table.min_freq_hz() || grid_abs.back() > table.max_freq_hz())
    throw std::invalid_argument("ingest_measurement: table does not cover the grid's frequency range");

  dvec freqs(table.size()), mags(table.size()), delays(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    freqs[i] = table.rows()[i].freq_hz;
    mags[i] = table.rows()[i].magnitude_db;
    delays[i] = table.rows()[i].group_delay_s;
  }

  const dvec mag_db = interp_linear(freqs, moving_average(mags, smooth_window), grid_abs);
  const dvec group_delay = interp_linear(freqs, moving_average(delays, smooth_window), grid_abs);
  const dvec phase = phase_from_group_delay(group_delay, grid.spacing_hz());
  return UnitFiberResponse::make(grid, combine_magnitude_phase(mag_db, phase));
}

UnitFiberResponse synth_channel(const SyntheticFiberParams& params, const FrequencyGrid& grid) {
  if (params.atten_low_db < 0.0 || params.atten_high_db < 0.0)
    throw std::invalid_argument("synth_channel: attenuations must be non-negative");
  if (!(params.mean_group_delay_s > 0.0))
    throw std::invalid_argument("synth_channel: mean group delay must be positive");

  const int bins = grid.size();
  const double mid = 0.5 * (grid.freq_hz(0) + grid.freq_hz(bins - 1));
  dvec mag_db(bins), group_delay(bins);
  for (int k = 0; k < bins; ++k) {
    const double frac = static_cast<double>(k) / (bins - 1);
    mag_db[k] = -(params.atten_low_db + (params.atten_high_db - params.atten_low_db) * frac);
    group_delay[k] = params.mean_group_delay_s +
                     params.group_delay_slope_s_per_hz * (grid.freq_hz(k) - mid);
  }
  const dvec phase = phase_from_group_delay(group_delay, grid.spacing_hz());
  return UnitFiberResponse::make(grid, combine_magnitude_phase(mag_db, phase));
}

cvec cascade_response(const UnitFiberResponse& unit, int hops) {
  if (hops < 0) throw std::invalid_argument("cascade_response: hop count must be non-negative");
  cvec out(unit.response().size(), cplx{1.0, 0.0});
  for (int i = 0; i < hops; ++i) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= unit.response()[k];
  }
  return out;
}

ImpulseTaps impulse_taps(const UnitFiberResponse& unit, double energy_fraction) {
  if (!(energy_fraction > 0.0) || energy_fraction > 1.0)
    throw std::invalid_argument("impulse_taps: energy fraction must lie in (0, 1]");
  const cvec full = dft::inverse(unit.response());
  double total = 0.0;
  for (const cplx& b : full) total += std::norm(b);

  std::size_t keep = full.size();
  double acc = 0.0;
  for (std::size_t l = 0; l < full.size(); ++l) {
    acc += std::norm(full[l]);
    if (acc >= energy_fraction * total) {
      keep = l + 1;
      break;
    }
  }
  ImpulseTaps taps;
  taps.beta.assign(full.begin(), full.begin() + keep);
  taps.sample_interval_s = unit.grid().sample_interval_s();
  double kept = 0.0;
  for (const cplx& b : taps.beta) kept += std::norm(b);
  taps.truncation_loss = total > 0.0 ? std::max(0.0, 1.0 - kept / total) : 0.0;
  return taps;
}

cvec taps_to_response(const ImpulseTaps& taps, const FrequencyGrid& grid) {
  if (taps.beta.size() > static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("taps_to_response: more taps than grid bins");
  cvec padded(grid.size(), cplx{0.0, 0.0});
  std::copy(taps.beta.begin(), taps.beta.end(), padded.begin());
  return dft::forward(padded);
}

}  // namespace rofdist
