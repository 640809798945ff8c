#include "rofdist/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rofdist::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    while (consumed < s.size() && std::isspace(static_cast<unsigned char>(s[consumed]))) ++consumed;
    if (consumed != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed number '" + s + "'");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void require_header(const std::vector<std::string>& lines, const std::string& expected,
                    const std::string& path) {
  if (lines.empty() || lines.front() != expected)
    throw std::runtime_error(path + ": expected header '" + expected + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

MeasurementTable read_measurement_csv(const std::string& path) {
  const auto lines = read_lines(path);
  require_header(lines, "freq_hz,mag_db,group_delay_s", path);
  std::vector<MeasurementRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_line(lines[i]);
    if (fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": expected 3 fields");
    rows.push_back({parse_double(fields[0], path, i + 1), parse_double(fields[1], path, i + 1),
                    parse_double(fields[2], path, i + 1)});
  }
  return MeasurementTable::from_rows(std::move(rows));
}

void write_measurement_csv(const std::string& path, const MeasurementTable& table) {
  std::string out = "freq_hz,mag_db,group_delay_s\n";
  for (const MeasurementRow& row : table.rows()) {
    out += format_double(row.freq_hz);
    out += ',';
    out += format_double(row.magnitude_db);
    out += ',';
    out += format_double(row.group_delay_s);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_channel_csv(const std::string& path, const UnitFiberResponse& unit) {
  std::string out = "freq_hz,re,im\n";
  for (int k = 0; k < unit.grid().size(); ++k) {
    out += format_double(unit.grid().absolute_hz(k));
    out += ',';
    out += format_double(unit.response()[k].real());
    out += ',';
    out += format_double(unit.response()[k].imag());
    out += '\n';
  }
  atomic_write(path, out);
}

UnitFiberResponse read_channel_csv(const std::string& path) {
  const auto lines = read_lines(path);
  require_header(lines, "freq_hz,re,im", path);
  dvec freqs;
  cvec response;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_line(lines[i]);
    if (fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": expected 3 fields");
    freqs.push_back(parse_double(fields[0], path, i + 1));
    response.emplace_back(parse_double(fields[1], path, i + 1), parse_double(fields[2], path, i + 1));
  }
  if (freqs.size() < 2) throw std::runtime_error(path + ": need at least 2 channel rows");

  const int bins = static_cast<int>(freqs.size());
  const double spacing = freqs[1] - freqs[0];
  if (!(spacing > 0.0)) throw std::runtime_error(path + ": frequencies must increase");
  for (int k = 1; k < bins; ++k) {
    if (std::abs(freqs[k] - freqs[0] - k * spacing) > 1e-6 * spacing)
      throw std::runtime_error(path + ": channel rows must be uniformly spaced");
  }
  const double bandwidth = spacing * bins;
  const double center = freqs[0] + bandwidth / 2.0;
  return UnitFiberResponse::make(FrequencyGrid::make(center, bandwidth, bins), std::move(response));
}

void write_frame_csv(const std::string& path, const Frame& frame) {
  std::string out = "k,re,im\n";
  for (std::size_t k = 0; k < frame.freq.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(frame.freq[k].real());
    out += ',';
    out += format_double(frame.freq[k].imag());
    out += '\n';
  }
  atomic_write(path, out);
}

Frame read_frame_csv(const std::string& path, const FrequencyGrid& grid) {
  const auto lines = read_lines(path);
  require_header(lines, "k,re,im", path);
  cvec freq;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_line(lines[i]);
    if (fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": expected 3 fields");
    const double k = parse_double(fields[0], path, i + 1);
    if (k != static_cast<double>(freq.size()))
      throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": bin indices must run 0..K-1");
    freq.emplace_back(parse_double(fields[1], path, i + 1), parse_double(fields[2], path, i + 1));
  }
  if (static_cast<int>(freq.size()) != grid.size())
    throw std::runtime_error(path + ": found " + std::to_string(freq.size()) + " bins, grid has " +
                             std::to_string(grid.size()));
  return Frame{grid, std::move(freq)};
}

namespace {

void append_trial_row(std::string& out, const TrialOutcome& t) {
  out += std::to_string(t.trial_index);
  out += ',';
  out += std::to_string(t.r_true);
  out += ',';
  out += std::to_string(t.estimate.r_hat);
  out += ',';
  out += format_double(t.estimate.tau_hat_s);
  out += ',';
  out += format_double(t.estimate.a_hat.real());
  out += ',';
  out += format_double(t.estimate.a_hat.imag());
  out += ',';
  out += format_double(t.estimate.cost);
  out += ',';
  out += std::to_string(t.estimate.sweeps);
  out += ',';
  out += t.estimate.converged ? '1' : '0';
  out += '\n';
}

}  // namespace

std::string trials_csv_text(const std::vector<TrialOutcome>& trials) {
  std::string out = "trial,r_true,r_hat,tau_hat_s,a_hat_re,a_hat_im,cost,sweeps,converged\n";
  for (const TrialOutcome& t : trials) append_trial_row(out, t);
  return out;
}

void write_trials_csv(const std::string& path, const std::vector<TrialOutcome>& trials) {
  atomic_write(path, trials_csv_text(trials));
}

std::string curve_csv_text(const std::vector<ErrorRateCurve>& curves) {
  std::string out = "lambda_label,amplitude,trials,errors,error_rate\n";
  for (const ErrorRateCurve& curve : curves) {
    for (const ErrorRatePoint& p : curve.points) {
      out += curve.label;
      out += ',';
      out += format_double(p.amplitude);
      out += ',';
      out += std::to_string(p.trials);
      out += ',';
      out += std::to_string(p.errors);
      out += ',';
      out += format_double(p.error_rate);
      out += '\n';
    }
  }
  return out;
}

void write_curve_csv(const std::string& path, const std::vector<ErrorRateCurve>& curves) {
  atomic_write(path, curve_csv_text(curves));
}

void write_estimate_csv(const std::string& path, const EstimationResult& result, int r_true) {
  TrialOutcome t;
  t.trial_index = 0;
  t.r_true = r_true;
  t.estimate = result;
  atomic_write(path, trials_csv_text({t}));
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rofdist::csv
