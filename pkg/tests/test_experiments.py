import numpy as np
import pytest

from qsmc import (ConfigError, SweepSpec, aircraft_benchmark,
                  builtin_scenario_path, load_aircraft_scenario, run_sweep)
from qsmc.experiments import _max_workers, shared_sampler

# frozen from the first validated runs of the shipped benchmark; regression
# anchors, not external truth
PEAKS_NOISE_FREE = {"m1": 26.764879489436318, "m2": 28.103535668408153,
                    "mm1": 2.169726470433033, "mm2": 3.8983833816375526}


def test_builtin_scenario_resolution():
    path = builtin_scenario_path("aircraft")
    assert path.endswith("aircraft.scn")
    with pytest.raises(ConfigError):
        builtin_scenario_path("submarine")


def test_spec_validation(bench_scenario):
    with pytest.raises(ConfigError):
        SweepSpec(base=bench_scenario, T_values=(0.02, 0.01))
    with pytest.raises(ConfigError):
        SweepSpec(base=bench_scenario, T_values=(0.02, 0.01, 0.004))
    with pytest.raises(ConfigError):
        SweepSpec(base=bench_scenario, metric="settling_time")
    spec = SweepSpec(base=bench_scenario, T_values=(0.0025, 0.01, 0.005, 0.02))
    assert spec.T_values == (0.02, 0.01, 0.005, 0.0025)


def test_max_workers_env(monkeypatch):
    monkeypatch.setenv("QSMC_THREADS", "3")
    assert _max_workers() == 3
    monkeypatch.setenv("QSMC_THREADS", "zero")
    with pytest.raises(ConfigError):
        _max_workers()
    monkeypatch.delenv("QSMC_THREADS")
    assert _max_workers() >= 1


def test_shared_sampler_cache(bench_scenario):
    a = shared_sampler(bench_scenario.plant, 0.01, bench_scenario.disturbance)
    b = shared_sampler(bench_scenario.plant, 0.01, bench_scenario.disturbance)
    c = shared_sampler(bench_scenario.plant, 0.02, bench_scenario.disturbance)
    assert a is b
    assert a is not c


def test_sweep_surface_bound_first_order(bench_scenario):
    spec = SweepSpec(base=bench_scenario, metric="s_bound")
    rep = run_sweep(spec)
    assert rep.kind == "mm1" and rep.metric == "s_bound"
    assert len(rep.points) == 4
    assert all(p.certified for p in rep.points)
    assert 0.7 <= rep.slope <= 1.3
    assert rep.half_width < 0.2
    # the bound itself shrinks monotonically with T
    vals = [p.value for p in rep.points]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_sweep_input_peak_bounded(bench_scenario):
    spec = SweepSpec(base=bench_scenario, metric="u_peak",
                     T_values=(0.02, 0.01, 0.005))
    rep = run_sweep(spec)
    assert -0.3 <= rep.slope <= 0.3
    vals = list(rep.values().values())
    assert max(vals) / min(vals) < 2.0


def test_sweep_flags_uncertified_points(bench_scenario):
    from conftest import H_UNSTABLE
    spec = SweepSpec(base=bench_scenario.with_(H=H_UNSTABLE),
                     T_values=(0.02, 0.01, 0.005))
    rep = run_sweep(spec)
    assert all(not p.certified for p in rep.points)
    assert all(p.value is None for p in rep.points)
    assert rep.slope is None
    assert any("spectral radius" in (p.flagged or "") for p in rep.points)


def test_benchmark_regression_values():
    rep = aircraft_benchmark(noise=False)
    for kind, expect in PEAKS_NOISE_FREE.items():
        assert rep.peak_median[kind] == pytest.approx(expect, rel=1e-9), kind
    assert rep.ranking_ok
    assert rep.runs["m2"].s_bound < 1e-7
    assert rep.runs["mm1"].s_bound < 1e-3


def test_benchmark_reproducible():
    a = aircraft_benchmark(noise=False)
    b = aircraft_benchmark(noise=False)
    for kind in ("m1", "m2", "mm1", "mm2"):
        assert np.array_equal(a.runs[kind].trajectory.x, b.runs[kind].trajectory.x)
        assert np.array_equal(a.runs[kind].trajectory.u, b.runs[kind].trajectory.u)


def test_benchmark_noise_seeds_differ():
    rep = aircraft_benchmark(noise=True, seeds=(1, 2, 3))
    assert rep.noise is True
    assert rep.seeds == (1, 2, 3)
    # medians over three seeds still near the noise-free peaks
    for kind, expect in PEAKS_NOISE_FREE.items():
        assert rep.peak_median[kind] == pytest.approx(expect, rel=0.35), kind


def test_benchmark_runtime_budget():
    rep = aircraft_benchmark(noise=False)
    for kind, brun in rep.runs.items():
        assert brun.runtime < 5.0, (kind, brun.runtime)


def test_scenario_loader_round_trip():
    sf = load_aircraft_scenario()
    assert sf.scenario.kind == "mm1"
    assert sf.out_dir == "out"
