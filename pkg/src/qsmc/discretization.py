"""Zero-order-hold discretization and sampled disturbances.

For a period T the exact sample-to-sample model is

    x[k+1] = state_map x[k] + input_map u[k] + d[k],

with state_map = exp(AT), input_map the held-input integral, and d[k] the
disturbance carried across one interval.  Alongside the exact pair we keep
the O(T)-expansion matrices

    drift_rate      = (state_map - I) / T          (-> A as T -> 0)
    drift_curvature = (state_map - I - T A) / T^2  (bounded as T -> 0)
    input_rate      = input_map / T                (-> B)
    input_curvature = (input_map - T B) / T^2      (bounded)

which the control laws and the closed-loop analysis are written in terms of.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import expm

from .errors import ConfigError, DisturbanceRangeError
from .plant import ContinuousPlant, DisturbanceSignal

# relative split guard: boundary points closer than this to an interval end
# are not worth splitting at (quadrature sees a zero-length piece otherwise)
_EDGE = 1e-13


@dataclass(frozen=True)
class DiscretePlant:
    T: float
    state_map: np.ndarray        # exp(A T)
    input_map: np.ndarray        # int_0^T exp(A tau) dtau B
    drift_rate: np.ndarray
    drift_curvature: np.ndarray
    input_rate: np.ndarray
    input_curvature: np.ndarray


def discretize(plant: ContinuousPlant, T: float) -> DiscretePlant:
    """Exact ZOH discretization via the block matrix exponential.

    exp([[A, B], [0, 0]] T) carries exp(AT) in the top-left block and the
    held-input integral in the top-right, both to machine precision; no
    quadrature is involved for the linear part.
    """
    if not T > 0:
        raise ConfigError(f"sampling period must be positive, got {T}")
    n, m = plant.n, plant.m
    blk = np.zeros((n + m, n + m))
    blk[:n, :n] = plant.A
    blk[:n, n:] = plant.B
    e = expm(blk * T)
    state_map = e[:n, :n]
    input_map = e[:n, n:]
    # subtract I first, then T A: limits cancellation for small T
    sm_minus_i = state_map - np.eye(n)
    return DiscretePlant(
        T=T,
        state_map=state_map,
        input_map=input_map,
        drift_rate=sm_minus_i / T,
        drift_curvature=(sm_minus_i - T * plant.A) / T ** 2,
        input_rate=input_map / T,
        input_curvature=(input_map - T * plant.B) / T ** 2,
    )


class DisturbanceSampler:
    """Quadrature of d[k] = int_0^T exp(A tau) B f((k+1)T - tau) dtau.

    The matrix factor exp(A tau) B is cached per quadrature node: the
    adaptive rule revisits the same tau values for every interior sample, so
    after the first few samples only the scalar disturbance forms are
    re-evaluated.  Intervals are split at disturbance segment boundaries and
    each piece evaluates its owning segment's forms only, so the integrand
    is smooth on every piece.
    """

    def __init__(self, plant: ContinuousPlant, T: float, sig: DisturbanceSignal,
                 tol: float | None = None):
        if not T > 0:
            raise ConfigError(f"sampling period must be positive, got {T}")
        if sig.m != plant.m:
            raise ConfigError(
                f"disturbance has {sig.m} channels, plant has {plant.m} inputs")
        self.plant = plant
        self.T = T
        self.sig = sig
        self.tol = tol if tol is not None else 1e-12 * (1 + np.linalg.norm(plant.B))
        self._eab_cache: dict = {}
        self._dk_cache: dict = {}

    def _eab(self, tau: float) -> np.ndarray:
        v = self._eab_cache.get(tau)
        if v is None:
            v = expm(self.plant.A * tau) @ self.plant.B
            self._eab_cache[tau] = v
        return v

    def at(self, k: int) -> np.ndarray:
        cached = self._dk_cache.get(k)
        if cached is not None:
            return cached
        T = self.T
        t1 = (k + 1) * T
        if k < 0 or t1 - T < 0 or t1 > self.sig.t_end + _EDGE:
            raise DisturbanceRangeError(
                f"sample {k} covers [{t1 - T}, {t1}), outside [0, {self.sig.t_end})")
        # tau runs backwards through the interval: tau = t1 - t
        cuts = [0.0, T]
        for b in self.sig.boundaries_within(t1 - T, t1):
            tau_b = t1 - b
            if _EDGE < tau_b < T - _EDGE:
                cuts.append(tau_b)
        cuts = sorted(set(cuts))
        total = np.zeros(self.plant.n)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            mid_t = t1 - 0.5 * (lo + hi)
            seg = self.sig.segment_index(min(mid_t, np.nextafter(self.sig.t_end, 0)))
            val, _ = quad_vec(
                lambda tau: self._eab(tau) @ self.sig.value_in_segment(seg, t1 - tau),
                lo, hi, epsabs=self.tol, epsrel=1e-13)
            total += val
        self._dk_cache[k] = total
        return total


def sampled_disturbance(plant: ContinuousPlant, T: float, sig: DisturbanceSignal,
                        k: int, tol: float | None = None) -> np.ndarray:
    """One-shot d[k]; loops should hold a DisturbanceSampler instead."""
    return DisturbanceSampler(plant, T, sig, tol=tol).at(k)


def matched_residual_split(plant: ContinuousPlant, T: float, sig: DisturbanceSignal,
                           k: int, sampler: DisturbanceSampler | None = None):
    """Split d[k] into the held-input part and the sampling residual.

    matched  = input_map f(kT)   (what a ZOH input equal to f[k] produces)
    residual = d[k] - matched    (first-order small: O(T) relative, O(T^2)
                                  absolute, provided f' is bounded on the
                                  sample interval)
    Returns (matched, residual).
    """
    if sampler is None:
        sampler = DisturbanceSampler(plant, T, sig)
    disc = discretize(plant, T)
    matched = disc.input_map @ sig.value(k * T)
    residual = sampler.at(k) - matched
    return matched, residual


@dataclass(frozen=True)
class DiffReport:
    """Finite-difference growth diagnostics of the sampled disturbance."""
    T: float
    k_range: tuple
    first_diff_max: float    # max_k |d[k] - d[k-1]|, expected O(T^2)
    second_diff_max: float   # max_k |d[k] - 2d[k-1] + d[k-2]|, expected O(T^3)
    first_order: int = 2
    second_order: int = 3
    spans_boundary: bool = False


def difference_diagnostics(plant: ContinuousPlant, T: float, sig: DisturbanceSignal,
                           k_range, sampler: DisturbanceSampler | None = None) -> DiffReport:
    """First and second differences of d[k] over k_range (an iterable of
    consecutive sample indices, at least 3 of them)."""
    ks = sorted(k_range)
    if len(ks) < 3:
        raise ConfigError("difference diagnostics need at least 3 samples")
    if sampler is None:
        sampler = DisturbanceSampler(plant, T, sig)
    d = {k: sampler.at(k) for k in ks}
    first = max(np.linalg.norm(d[k] - d[km]) for k, km in zip(ks[1:], ks[:-1]))
    second = max(np.linalg.norm(d[k] - 2 * d[k1] + d[k2])
                 for k, k1, k2 in zip(ks[2:], ks[1:-1], ks[:-2]))
    spans = bool(sig.boundaries_within(ks[0] * T, (ks[-1] + 1) * T))
    return DiffReport(T=T, k_range=(ks[0], ks[-1]), first_diff_max=float(first),
                      second_diff_max=float(second), spans_boundary=spans)
