// Python bindings for the rofdist core: channel building, cascade simulation,
// estimation, and Monte Carlo sweeps.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rofdist/cascade.hpp"
#include "rofdist/csv.hpp"
#include "rofdist/estimate.hpp"
#include "rofdist/montecarlo.hpp"

namespace py = pybind11;
using namespace rofdist;

PYBIND11_MODULE(_core, m) {
  m.doc() = "cascaded radio-over-fiber simulation and propagation distance estimation";
  m.attr("__version__") = ROFDIST_VERSION;

  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init(&FrequencyGrid::make), py::arg("center_hz"), py::arg("bandwidth_hz"),
           py::arg("bins"))
      .def_property_readonly("center_hz", &FrequencyGrid::center_hz)
      .def_property_readonly("bandwidth_hz", &FrequencyGrid::bandwidth_hz)
      .def_property_readonly("freqs_hz", &FrequencyGrid::freqs_hz)
      .def("__len__", &FrequencyGrid::size)
      .def("__repr__", [](const FrequencyGrid& g) {
        return "FrequencyGrid(center_hz=" + std::to_string(g.center_hz()) +
               ", bandwidth_hz=" + std::to_string(g.bandwidth_hz()) +
               ", bins=" + std::to_string(g.size()) + ")";
      });

  py::class_<SyntheticFiberParams>(m, "SyntheticFiberParams")
      .def(py::init<>())
      .def_readwrite("atten_low_db", &SyntheticFiberParams::atten_low_db)
      .def_readwrite("atten_high_db", &SyntheticFiberParams::atten_high_db)
      .def_readwrite("mean_group_delay_s", &SyntheticFiberParams::mean_group_delay_s)
      .def_readwrite("group_delay_slope_s_per_hz",
                     &SyntheticFiberParams::group_delay_slope_s_per_hz);

  py::class_<UnitFiberResponse>(m, "UnitFiberResponse")
      .def_static("make", &UnitFiberResponse::make, py::arg("grid"), py::arg("response"))
      .def_property_readonly("grid", &UnitFiberResponse::grid)
      .def_property_readonly("response", &UnitFiberResponse::response)
      .def_property_readonly("magnitude", &UnitFiberResponse::magnitude)
      .def_property_readonly("phase_rad", &UnitFiberResponse::phase_rad);

  py::class_<ImpulseTaps>(m, "ImpulseTaps")
      .def_readonly("beta", &ImpulseTaps::beta)
      .def_readonly("sample_interval_s", &ImpulseTaps::sample_interval_s)
      .def_readonly("truncation_loss", &ImpulseTaps::truncation_loss);

  m.def("synth_channel", &synth_channel, py::arg("params"), py::arg("grid"));
  m.def("cascade_response", &cascade_response, py::arg("unit"), py::arg("hops"));
  m.def("impulse_taps", &impulse_taps, py::arg("unit"), py::arg("energy_fraction") = 1.0);
  m.def("taps_to_response", &taps_to_response, py::arg("taps"), py::arg("grid"));
  m.def("read_channel_csv", &csv::read_channel_csv, py::arg("path"));
  m.def("write_channel_csv", &csv::write_channel_csv, py::arg("path"), py::arg("unit"));

  py::class_<PilotSequence>(m, "PilotSequence")
      .def_readonly("symbols", &PilotSequence::symbols)
      .def_readonly("seed", &PilotSequence::seed);
  m.def("generate_pilot", &generate_pilot, py::arg("length"), py::arg("seed"));

  py::class_<WirelessFrontEnd>(m, "WirelessFrontEnd")
      .def(py::init([](cplx gain, double delay_s) {
             return WirelessFrontEnd{gain, delay_s};
           }),
           py::arg("gain"), py::arg("delay_s"))
      .def_readwrite("gain", &WirelessFrontEnd::gain)
      .def_readwrite("delay_s", &WirelessFrontEnd::delay_s);

  py::class_<Frame>(m, "Frame")
      .def_property_readonly("grid", [](const Frame& f) { return f.grid; })
      .def_property_readonly("freq", [](const Frame& f) { return f.freq; });
  m.def("apply_front_end", &apply_front_end, py::arg("pilot"), py::arg("front_end"),
        py::arg("grid"));
  m.def("to_time", &to_time, py::arg("frame"));
  m.def("to_freq", &to_freq, py::arg("time_samples"), py::arg("grid"));

  py::class_<AmplifierModel>(m, "AmplifierModel")
      .def(py::init([](double gain, cplx nonlinearity) {
             return AmplifierModel{gain, nonlinearity};
           }),
           py::arg("gain") = 1.0, py::arg("nonlinearity") = cplx{0.0, 0.0})
      .def_readwrite("gain", &AmplifierModel::gain)
      .def_readwrite("nonlinearity", &AmplifierModel::nonlinearity);
  m.def("lambda_from_polar", &lambda_from_polar, py::arg("scale"), py::arg("phase_rad"));
  m.def("amplitude_from_db", &amplitude_from_db, py::arg("db"));

  py::enum_<NoiseMode>(m, "NoiseMode")
      .value("per_stage", NoiseMode::per_stage)
      .value("aggregate_at_cu", NoiseMode::aggregate_at_cu);

  py::class_<StageOptions>(m, "StageOptions").def(py::init<>());

  py::class_<CascadeConfig>(m, "CascadeConfig")
      .def(py::init<>())
      .def_readwrite("total_rus", &CascadeConfig::total_rus)
      .def_readwrite("unit", &CascadeConfig::unit)
      .def_readwrite("pa", &CascadeConfig::pa)
      .def_readwrite("noise_var", &CascadeConfig::noise_var)
      .def_readwrite("noise_mode", &CascadeConfig::noise_mode)
      .def_readwrite("seed", &CascadeConfig::seed)
      .def_readwrite("taps_energy_fraction", &CascadeConfig::taps_energy_fraction);

  m.def("pa_apply", py::overload_cast<cplx, const AmplifierModel&>(&pa_apply), py::arg("x"),
        py::arg("pa"));
  m.def("pa_apply_vec", py::overload_cast<const cvec&, const AmplifierModel&>(&pa_apply),
        py::arg("x"), py::arg("pa"));
  m.def(
      "stage_function",
      [](const cvec& x, const ImpulseTaps& taps, const AmplifierModel& pa) {
        return stage_function(x, taps, pa);
      },
      py::arg("x"), py::arg("taps"), py::arg("pa"));
  m.def("propagate_linear", &propagate_linear, py::arg("x0"), py::arg("hops"), py::arg("config"));
  m.def("propagate_nonlinear", &propagate_nonlinear, py::arg("x0"), py::arg("hops"),
        py::arg("config"));

  py::class_<LinearGridSpec>(m, "LinearGridSpec")
      .def_static("defaults", &LinearGridSpec::defaults, py::arg("total_rus") = 5)
      .def_readwrite("r_candidates", &LinearGridSpec::r_candidates)
      .def_readwrite("tau_grid_s", &LinearGridSpec::tau_grid_s);

  py::class_<NonlinearGridSpec>(m, "NonlinearGridSpec")
      .def_static("defaults", &NonlinearGridSpec::defaults, py::arg("total_rus") = 5)
      .def_readwrite("tau_grid_s", &NonlinearGridSpec::tau_grid_s)
      .def_readwrite("amp_grid", &NonlinearGridSpec::amp_grid)
      .def_readwrite("phase_grid_rad", &NonlinearGridSpec::phase_grid_rad)
      .def_readwrite("r_candidates", &NonlinearGridSpec::r_candidates)
      .def_readwrite("cost_threshold", &NonlinearGridSpec::cost_threshold)
      .def_readwrite("max_sweeps", &NonlinearGridSpec::max_sweeps);

  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("r_hat", &EstimationResult::r_hat)
      .def_readonly("tau_hat_s", &EstimationResult::tau_hat_s)
      .def_readonly("a_hat", &EstimationResult::a_hat)
      .def_readonly("cost", &EstimationResult::cost)
      .def_readonly("sweeps", &EstimationResult::sweeps)
      .def_readonly("converged", &EstimationResult::converged)
      .def_readonly("ambiguous", &EstimationResult::ambiguous)
      .def("__repr__", [](const EstimationResult& r) {
        return "EstimationResult(r_hat=" + std::to_string(r.r_hat) +
               ", tau_hat_s=" + std::to_string(r.tau_hat_s) + ", cost=" + std::to_string(r.cost) +
               ")";
      });

  m.def("model_vector", &model_vector, py::arg("hops"), py::arg("tau_s"), py::arg("pilot"),
        py::arg("unit"), py::arg("gain"));
  m.def("closed_form_gain", &closed_form_gain, py::arg("model"), py::arg("received"));
  m.def("linear_nls", &linear_nls, py::arg("received"), py::arg("spec"), py::arg("pilot"),
        py::arg("unit"), py::arg("gain"));

  py::class_<NonlinearModelContext>(m, "NonlinearModelContext")
      .def_static("make", &NonlinearModelContext::make, py::arg("pilot"), py::arg("unit"),
                  py::arg("pa"), py::arg("taps_energy_fraction") = 1.0,
                  py::arg("options") = StageOptions{});

  m.def("nonlinear_cost", &nonlinear_cost, py::arg("a"), py::arg("tau_s"), py::arg("hops"),
        py::arg("received"), py::arg("ctx"));
  m.def(
      "coordinate_descent",
      [](const Frame& rx, const NonlinearGridSpec& spec, const NonlinearModelContext& ctx) {
        return coordinate_descent(rx, spec, ctx);
      },
      py::arg("received"), py::arg("spec"), py::arg("ctx"));
  m.def(
      "exhaustive_oracle",
      [](const Frame& rx, const NonlinearGridSpec& spec, const NonlinearModelContext& ctx,
         std::size_t max_points) { return exhaustive_oracle(rx, spec, ctx, max_points); },
      py::arg("received"), py::arg("spec"), py::arg("ctx"), py::arg("max_points") = 1'000'000);

  py::enum_<EstimatorKind>(m, "EstimatorKind")
      .value("linear", EstimatorKind::linear)
      .value("coordinate_descent", EstimatorKind::coordinate_descent);

  py::class_<LambdaSetting>(m, "LambdaSetting")
      .def(py::init([](std::string label, cplx value) {
             return LambdaSetting{std::move(label), value};
           }),
           py::arg("label"), py::arg("value"))
      .def_readwrite("label", &LambdaSetting::label)
      .def_readwrite("value", &LambdaSetting::value);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("defaults", &ExperimentConfig::defaults)
      .def_readwrite("measurement_csv", &ExperimentConfig::measurement_csv)
      .def_readwrite("synth", &ExperimentConfig::synth)
      .def_readwrite("smooth_window", &ExperimentConfig::smooth_window)
      .def_readwrite("center_hz", &ExperimentConfig::center_hz)
      .def_readwrite("bandwidth_hz", &ExperimentConfig::bandwidth_hz)
      .def_readwrite("bins", &ExperimentConfig::bins)
      .def_readwrite("total_rus", &ExperimentConfig::total_rus)
      .def_readwrite("r_true", &ExperimentConfig::r_true)
      .def_readwrite("tau_true_s", &ExperimentConfig::tau_true_s)
      .def_readwrite("gain_db", &ExperimentConfig::gain_db)
      .def_readwrite("lambdas", &ExperimentConfig::lambdas)
      .def_readwrite("noise_var", &ExperimentConfig::noise_var)
      .def_readwrite("noise_mode", &ExperimentConfig::noise_mode)
      .def_readwrite("amplitudes", &ExperimentConfig::amplitudes)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("estimator", &ExperimentConfig::estimator);

  py::class_<ErrorRatePoint>(m, "ErrorRatePoint")
      .def_readonly("amplitude", &ErrorRatePoint::amplitude)
      .def_readonly("trials", &ErrorRatePoint::trials)
      .def_readonly("errors", &ErrorRatePoint::errors)
      .def_readonly("error_rate", &ErrorRatePoint::error_rate);

  py::class_<ErrorRateCurve>(m, "ErrorRateCurve")
      .def_readonly("label", &ErrorRateCurve::label)
      .def_readonly("points", &ErrorRateCurve::points);

  py::class_<TrialOutcome>(m, "TrialOutcome")
      .def_readonly("lambda_index", &TrialOutcome::lambda_index)
      .def_readonly("amplitude_index", &TrialOutcome::amplitude_index)
      .def_readonly("trial_index", &TrialOutcome::trial_index)
      .def_readonly("r_true", &TrialOutcome::r_true)
      .def_readonly("estimate", &TrialOutcome::estimate)
      .def_readonly("success", &TrialOutcome::success);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("curves", &SweepResult::curves)
      .def_readonly("trials", &SweepResult::trials);

  m.def(
      "run_trial",
      [](const ExperimentConfig& cfg, int lambda_index, int amplitude_index, int trial_index) {
        return run_trial(cfg, lambda_index, amplitude_index, trial_index);
      },
      py::arg("config"), py::arg("lambda_index"), py::arg("amplitude_index"),
      py::arg("trial_index"));
  m.def("sweep", &sweep, py::arg("config"), py::arg("jobs") = 0,
        py::call_guard<py::gil_scoped_release>());
}
