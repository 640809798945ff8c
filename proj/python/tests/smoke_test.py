"""Smoke tests for the python bindings: exercises each main operation once.

Run with PYTHONPATH pointing at the built package directory:
    PYTHONPATH=build/python python3 python/tests/smoke_test.py
"""

import cmath
import math
import sys

import rofdist as rd


def check(condition, message):
    if not condition:
        print(f"FAIL: {message}")
        sys.exit(1)
    print(f"ok: {message}")


def main():
    grid = rd.FrequencyGrid(center_hz=140e9, bandwidth_hz=1e9, bins=64)
    check(len(grid) == 64, "grid has 64 bins")
    check(abs(grid.freqs_hz[0] + 0.5e9) < 1e-3, "grid starts at -B/2")

    params = rd.SyntheticFiberParams()
    unit = rd.synth_channel(params, grid)
    check(min(unit.magnitude) > 0.7, "channel magnitude stays positive")
    check(
        abs(min(unit.magnitude) - 10 ** (-2.4 / 20)) < 1e-9,
        "worst-case attenuation is 2.4 dB",
    )

    squared = rd.cascade_response(unit, 2)
    check(
        all(
            abs(squared[k] - unit.response[k] ** 2) < 1e-12
            for k in range(len(grid))
        ),
        "two hops square the unit response",
    )

    taps = rd.impulse_taps(unit, 1.0)
    rebuilt = rd.taps_to_response(taps, grid)
    err = max(abs(a - b) for a, b in zip(rebuilt, unit.response))
    check(err < 1e-9, "taps round-trip to the response")

    pilot = rd.generate_pilot(64, seed=7)
    check(all(abs(abs(s) - 1) < 1e-12 for s in pilot.symbols), "pilot is unit modulus")

    a_true = cmath.rect(4.0, 0.9)
    tau_true = 5e-9
    fe = rd.WirelessFrontEnd(gain=a_true, delay_s=tau_true)
    x0 = rd.apply_front_end(pilot, fe, grid)
    time_view = rd.to_time(x0)
    back = rd.to_freq(time_view, grid)
    err = max(abs(a - b) for a, b in zip(back.freq, x0.freq))
    check(err < 1e-12, "transforms round-trip")

    pa = rd.AmplifierModel(
        gain=rd.amplitude_from_db(2.4),
        nonlinearity=rd.lambda_from_polar(-4.0 / 27.0, 0.2),
    )
    check(abs(rd.pa_apply(1.5, rd.AmplifierModel(1.0, -4.0 / 27.0)) - 1.0) < 1e-12,
          "cubic saturation point")

    cfg = rd.CascadeConfig()
    cfg.unit = unit
    cfg.pa = pa
    rx = rd.propagate_nonlinear(x0, 3, cfg)

    ctx = rd.NonlinearModelContext.make(pilot, unit, pa)
    check(rd.nonlinear_cost(a_true, tau_true, 3, rx, ctx) < 1e-12,
          "noiseless cost is zero at the truth")

    spec = rd.NonlinearGridSpec.defaults(5)
    spec.amp_grid = [2.0, 4.0, 8.0]
    est = rd.coordinate_descent(rx, spec, ctx)
    check(est.r_hat == 3, "coordinate descent recovers the hop count")
    check(abs(est.tau_hat_s - tau_true) < 1e-12, "coordinate descent recovers the delay")

    lin_cfg = rd.CascadeConfig()
    lin_cfg.unit = unit
    lin_cfg.pa = rd.AmplifierModel(rd.amplitude_from_db(2.4), 0j)
    lin_rx = rd.propagate_linear(x0, 2, lin_cfg)
    lin = rd.linear_nls(lin_rx, rd.LinearGridSpec.defaults(5), pilot, unit, lin_cfg.pa.gain)
    check(lin.r_hat == 2, "linear grid search recovers the hop count")
    check(abs(lin.a_hat - a_true) < 1e-9, "linear grid search recovers the gain")

    exp = rd.ExperimentConfig.defaults()
    exp.bins = 32
    exp.trials = 3
    exp.amplitudes = [2.0, 6.0]
    result = rd.sweep(exp, jobs=2)
    check(len(result.curves) == 2, "sweep returns one curve per lambda")
    check(
        all(0.0 <= p.error_rate <= 1.0 for c in result.curves for p in c.points),
        "error rates lie in [0, 1]",
    )
    again = rd.sweep(exp, jobs=1)
    same = all(
        t1.success == t2.success and t1.estimate.r_hat == t2.estimate.r_hat
        for t1, t2 in zip(result.trials, again.trials)
    )
    check(same, "sweeps are deterministic per master seed")

    print("smoke test passed")


if __name__ == "__main__":
    main()
