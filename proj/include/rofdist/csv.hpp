#pragma once

#include <string>
#include <vector>

#include "rofdist/channel.hpp"
#include "rofdist/montecarlo.hpp"
#include "rofdist/signal.hpp"

namespace rofdist::csv {

/// Shortest exact decimal form (%.17g): parsing it back yields the same
/// double, so export/import round trips are byte-stable after the first write.
std::string format_double(double value);

/// `freq_hz,mag_db,group_delay_s` rows, validated via MeasurementTable.
MeasurementTable read_measurement_csv(const std::string& path);
void write_measurement_csv(const std::string& path, const MeasurementTable& table);

/// Channel files: `freq_hz,re,im` with absolute frequencies; the grid is
/// reconstructed from the uniform row spacing on import.
void write_channel_csv(const std::string& path, const UnitFiberResponse& unit);
UnitFiberResponse read_channel_csv(const std::string& path);

/// Captures and debug frames: `k,re,im` frequency bins.
void write_frame_csv(const std::string& path, const Frame& frame);
Frame read_frame_csv(const std::string& path, const FrequencyGrid& grid);

/// `trial,r_true,r_hat,tau_hat_s,a_hat_re,a_hat_im,cost,sweeps,converged`.
std::string trials_csv_text(const std::vector<TrialOutcome>& trials);
void write_trials_csv(const std::string& path, const std::vector<TrialOutcome>& trials);

/// `lambda_label,amplitude,trials,errors,error_rate`.
std::string curve_csv_text(const std::vector<ErrorRateCurve>& curves);
void write_curve_csv(const std::string& path, const std::vector<ErrorRateCurve>& curves);

/// Single-row estimate export, same schema as trials_csv (r_true = -1 when
/// the truth is unknown).
void write_estimate_csv(const std::string& path, const EstimationResult& result, int r_true = -1);

/// Whole-file write through a temp file + rename, so failures never leave a
/// partial output behind.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace rofdist::csv
