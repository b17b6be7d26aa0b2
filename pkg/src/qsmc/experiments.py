"""Batch harness: sampling-period sweeps and the shipped benchmark.

Accuracy-order claims are checked by running one controller over a geometric
ladder of periods with the contraction rate beta held fixed in time (alpha
recomputed per T), measuring a steady-window metric, and fitting the slope
of log(metric) against log(T).  Expected slopes: surface bound 1 (mm1),
2 (mm2, m1), 3 (m2); input peak 0 for the contraction laws and -1 for the
deadbeat baselines.

Sweep points run in parallel (QSMC_THREADS caps the pool); per-period
disturbance quadratures are shared across controllers through a sampler
cache keyed by period.
"""

from __future__ import annotations

import importlib.resources
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import build_aug, variant_for_kind
from .controllers import make_gains
from .discretization import DisturbanceSampler, discretize
from .errors import ConfigError, DivergenceError
from .scenario import ScenarioFile, parse_scenario_file
from .simulate import (Scenario, Trajectory, default_steady_window,
                       measure_quasi_sliding, run)
from .surface import build_surface

DEFAULT_LADDER = (0.02, 0.01, 0.005, 0.0025)
METRICS = ("s_bound", "x_bound", "u_peak")


def _max_workers() -> int:
    env = os.environ.get("QSMC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"QSMC_THREADS must be an integer, got {env!r}")
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    T_values: tuple = DEFAULT_LADDER
    metric: str = "s_bound"
    beta: float | None = None     # default: taken from the base scenario
    window: tuple | None = None   # default: steady window of the base profile

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}")
        Ts = tuple(sorted(self.T_values, reverse=True))
        if len(Ts) < 3:
            raise ConfigError("ladder needs at least 3 periods")
        ratios = [Ts[i] / Ts[i + 1] for i in range(len(Ts) - 1)]
        if any(abs(r - ratios[0]) > 1e-9 * ratios[0] for r in ratios):
            raise ConfigError("ladder must be geometric (equal ratios)")
        object.__setattr__(self, "T_values", Ts)


@dataclass(frozen=True)
class SweepPoint:
    T: float
    value: float | None
    certified: bool
    flagged: str | None = None


@dataclass(frozen=True)
class ScalingReport:
    kind: str
    metric: str
    window: tuple
    points: tuple
    slope: float | None
    half_width: float | None   # 1-sigma from the fit residuals

    def values(self):
        return {p.T: p.value for p in self.points}


_sampler_cache: dict = {}


def shared_sampler(plant, T, sig) -> DisturbanceSampler:
    """Process-wide cache so all controllers at one period reuse the same
    disturbance quadratures.  Keyed by identity of the immutable inputs."""
    key = (id(plant), float(T), id(sig))
    smp = _sampler_cache.get(key)
    if smp is None:
        smp = DisturbanceSampler(plant, T, sig)
        _sampler_cache[key] = smp
    return smp


def _sweep_point(scenario: Scenario, beta: float, T: float, metric: str,
                 window) -> SweepPoint:
    sc = scenario.with_(T=T, alpha=None, beta=beta)
    # gate: surface assumption + unit-circle radius before trusting the metric
    try:
        design = build_surface(sc.plant, discretize(sc.plant, T), sc.H)
        gains = make_gains(design, beta=beta)
        aug = build_aug(design, gains, variant_for_kind(sc.kind))
        rho = float(np.max(np.abs(np.linalg.eigvals(aug.A_aug))))
        if rho >= 1.0:
            return SweepPoint(T, None, False, f"spectral radius {rho:.4f} >= 1")
        traj = run(sc, sampler=shared_sampler(sc.plant, T, sc.disturbance))
    except DivergenceError as exc:
        return SweepPoint(T, None, False, f"diverged: {exc}")
    except ConfigError as exc:
        return SweepPoint(T, None, False, str(exc))
    if metric == "u_peak":
        value = traj.u_peak
    else:
        s_bound, x_bound = measure_quasi_sliding(traj, window)
        value = s_bound if metric == "s_bound" else x_bound
    return SweepPoint(T, float(value), True)


def run_sweep(spec: SweepSpec) -> ScalingReport:
    base = spec.base
    beta = spec.beta
    if beta is None:
        if base.beta is not None:
            beta = base.beta
        elif base.alpha is not None:
            beta = (1.0 - base.alpha) / base.T
        else:
            raise ConfigError("no beta available for the sweep")
    window = spec.window or default_steady_window(base.disturbance, base.horizon)
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        points = list(pool.map(
            lambda T: _sweep_point(base, beta, T, spec.metric, window),
            spec.T_values))
    points.sort(key=lambda pt: pt.T, reverse=True)
    good = [(p.T, p.value) for p in points if p.certified and p.value and p.value > 0]
    slope = half = None
    if len(good) >= 2:
        lt = np.log([g[0] for g in good])
        lv = np.log([g[1] for g in good])
        if len(good) >= 3:
            (slope, _), cov = np.polyfit(lt, lv, 1, cov=True)
            half = float(np.sqrt(max(cov[0, 0], 0.0)))
        else:
            slope = float((lv[1] - lv[0]) / (lt[1] - lt[0]))
        slope = float(slope)
    return ScalingReport(kind=base.kind, metric=spec.metric, window=window,
                         points=tuple(points), slope=slope, half_width=half)


# ---------------------------------------------------------------------------
# shipped benchmark

def builtin_scenario_path(name: str = "aircraft") -> str:
    res = importlib.resources.files("qsmc") / "scenarios" / f"{name}.scn"
    if not res.is_file():
        raise ConfigError(f"no builtin scenario named {name!r}")
    return str(res)


def load_aircraft_scenario() -> ScenarioFile:
    return parse_scenario_file(builtin_scenario_path("aircraft"))


BENCH_KINDS = ("m1", "m2", "mm1", "mm2")


@dataclass(frozen=True)
class BenchmarkRun:
    kind: str
    u_peak: float
    s_bound: float
    x_bound: float
    runtime: float
    trajectory: Trajectory = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class BenchmarkReport:
    noise: bool
    seeds: tuple
    runs: dict                 # kind -> BenchmarkRun (first seed)
    peak_median: dict          # kind -> median peak over seeds
    window: tuple

    @property
    def ranking_ok(self) -> bool:
        """Second-order estimators should track the surface tighter than
        their first-order counterparts in the steady window."""
        r = self.runs
        return (r["m2"].s_bound < r["m1"].s_bound
                and r["mm2"].s_bound < r["mm1"].s_bound)


def aircraft_benchmark(noise: bool = False, seeds=(20260815,),
                       scenario_file: ScenarioFile | None = None) -> BenchmarkReport:
    """All four controllers on the shipped scenario under one shared noise
    realization per seed; peaks reported per kind, medianed over seeds."""
    sf = scenario_file or load_aircraft_scenario()
    base = sf.scenario
    window = default_steady_window(base.disturbance, base.horizon)
    runs = {}
    peaks: dict = {k: [] for k in BENCH_KINDS}
    for si, seed in enumerate(seeds):
        spec = base.noise
        if noise:
            spec = replace(spec, kind="uniform", seed=int(seed))
            if spec.halfwidth == 0.0:
                spec = replace(spec, halfwidth=0.005)
        else:
            spec = replace(spec, kind="none", seed=int(seed))
        for kind in BENCH_KINDS:
            sc = base.with_(kind=kind, noise=spec)
            t0 = time.perf_counter()
            traj = run(sc, sampler=shared_sampler(sc.plant, sc.T, sc.disturbance))
            dt = time.perf_counter() - t0
            peaks[kind].append(traj.u_peak)
            if si == 0:
                s_bound, x_bound = measure_quasi_sliding(traj, window)
                runs[kind] = BenchmarkRun(kind=kind, u_peak=traj.u_peak,
                                          s_bound=s_bound, x_bound=x_bound,
                                          runtime=dt, trajectory=traj)
    medians = {k: float(np.median(v)) for k, v in peaks.items()}
    return BenchmarkReport(noise=noise, seeds=tuple(seeds), runs=runs,
                           peak_median=medians, window=window)
