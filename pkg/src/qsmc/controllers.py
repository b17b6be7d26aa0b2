"""Discrete-time surface-feedback control laws.

All laws steer the switching vector toward the contraction target
s[k+1] = alpha s[k] with alpha = 1 - beta T.  Writing gain = s_gain_inv and
cpl = drift_from_s, the ideal (non-causal) law is

    u[k] = -(1/T) gain (((1-alpha) I + T cpl) s[k] + g[k]),

where g[k] collects the terms the controller cannot see (reduced-motion
coupling plus the sampled disturbance through the surface).  The
implementable laws replace g[k] by delayed reconstructions:

    first-order  (mm1):  g[k] ~ g[k-1]            -> residual O(T^2)
    second-order (mm2):  g[k] ~ 2 g[k-1] - g[k-2] -> residual O(T^3)

Folding the reconstruction into the law gives recursions in (s, u) history
alone; both the folded ("recursive") and explicit ("estimate") forms are
implemented and agree to rounding.  The deadbeat baselines m1/m2 are the
same recursions evaluated at alpha = 0 (target s[k+1] = 0); their gain
grows like 1/T, which is the behavior the contraction target removes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .surface import SurfaceDesign

KINDS = ("eq", "m1", "m2", "mm1", "mm2")

# first sample index at which each law may emit a nonzero input; earlier
# samples output zero while history fills
WARMUP = {"eq": 1, "m1": 1, "mm1": 1, "m2": 2, "mm2": 2}


@dataclass(frozen=True)
class GainSet:
    """Contraction parameters bound to one surface design."""
    T: float
    alpha: float
    beta: float
    s_gain: np.ndarray        # H C input_rate
    gain: np.ndarray          # its inverse
    drift_from_xi: np.ndarray
    drift_from_s: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in [0, 1), got {self.alpha}")
        if abs((1.0 - self.alpha) - self.beta * self.T) > 1e-12:
            raise ConfigError(
                f"alpha/beta inconsistent: 1 - alpha = {1 - self.alpha}, "
                f"beta T = {self.beta * self.T}")


def make_gains(design: SurfaceDesign, alpha: float | None = None,
               beta: float | None = None) -> GainSet:
    """Derive the missing one of (alpha, beta) from 1 - alpha = beta T; if
    both are given they must already satisfy the identity."""
    T = design.T
    if alpha is None and beta is None:
        raise ConfigError("need alpha or beta")
    if alpha is None:
        alpha = 1.0 - beta * T
    elif beta is None:
        beta = (1.0 - alpha) / T
    return GainSet(T=T, alpha=float(alpha), beta=float(beta),
                   s_gain=design.s_gain, gain=design.s_gain_inv,
                   drift_from_xi=design.drift_from_xi,
                   drift_from_s=design.drift_from_s)


# ---------------------------------------------------------------------------
# primitive laws

def equivalent_control(gains: GainSet, s_k: np.ndarray, g_k: np.ndarray) -> np.ndarray:
    """Ideal law given the true g[k]; oracle/analysis use only (g[k] is not
    available online).  With the exact g the surface contracts exactly:
    s[k+1] = alpha s[k]."""
    T, a = gains.T, gains.alpha
    m = gains.s_gain.shape[0]
    lead = (1.0 - a) * np.eye(m) + T * gains.drift_from_s
    return -(1.0 / T) * gains.gain @ (lead @ s_k + g_k)


def reconstruct_g_prev(gains: GainSet, s_k, s_km1, u_km1) -> np.ndarray:
    """Exact g[k-1] from observed history: algebraic inversion of the
    one-step surface update."""
    T = gains.T
    m = gains.s_gain.shape[0]
    step = np.eye(m) + T * gains.drift_from_s
    return s_k - step @ s_km1 - T * gains.s_gain @ u_km1


# ---------------------------------------------------------------------------
# stateful controllers

@dataclass
class ControllerState:
    """Single-owner mutable controller; sees only the measured switching
    vector, never the plant state."""
    kind: str
    gains: GainSet
    form: str = "recursive"   # recursive | estimate
    k: int = 0
    s_km1: np.ndarray | None = None
    s_km2: np.ndarray | None = None
    u_km1: np.ndarray | None = None
    u_km2: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown controller kind {self.kind!r}")
        if self.form not in ("recursive", "estimate"):
            raise ConfigError(f"unknown controller form {self.form!r}")
        m = self.gains.s_gain.shape[0]
        zero = np.zeros(m)
        self.s_km1 = zero.copy() if self.s_km1 is None else self.s_km1
        self.s_km2 = zero.copy() if self.s_km2 is None else self.s_km2
        self.u_km1 = zero.copy() if self.u_km1 is None else self.u_km1
        self.u_km2 = zero.copy() if self.u_km2 is None else self.u_km2

    @property
    def alpha_eff(self) -> float:
        # deadbeat baselines run the same recursions at alpha = 0
        return 0.0 if self.kind in ("m1", "m2") else self.gains.alpha

    def step(self, s_k: np.ndarray, g_k: np.ndarray | None = None) -> np.ndarray:
        """Consume s[k], emit u[k], advance history.  g_k is accepted only
        by the oracle kind 'eq'."""
        s_k = np.asarray(s_k, dtype=float)
        if self.k < WARMUP[self.kind]:
            u = np.zeros_like(s_k)
        elif self.kind == "eq":
            if g_k is None:
                raise ConfigError("kind 'eq' needs the oracle g[k]")
            u = equivalent_control(self.gains, s_k, g_k)
        elif self.kind in ("m1", "mm1"):
            u = (_mm1_recursive if self.form == "recursive" else _mm1_estimate)(
                self.gains, self.alpha_eff, s_k, self.s_km1, self.u_km1)
        else:
            u = (_mm2_recursive if self.form == "recursive" else _mm2_estimate)(
                self.gains, self.alpha_eff, s_k, self.s_km1, self.s_km2,
                self.u_km1, self.u_km2)
        self.s_km2, self.s_km1 = self.s_km1, s_k
        self.u_km2, self.u_km1 = self.u_km1, u
        self.k += 1
        return u


def _lead(gains: GainSet, scalar: float):
    m = gains.s_gain.shape[0]
    return scalar * np.eye(m) + gains.T * gains.drift_from_s


def _mm1_recursive(gains, a, s_k, s_km1, u_km1):
    T = gains.T
    return -(1.0 / T) * gains.gain @ (
        _lead(gains, 2.0 - a) @ s_k - _lead(gains, 1.0) @ s_km1) + u_km1


def _mm1_estimate(gains, a, s_k, s_km1, u_km1):
    g_prev = reconstruct_g_prev(gains, s_k, s_km1, u_km1)
    T = gains.T
    return -(1.0 / T) * gains.gain @ (_lead(gains, 1.0 - a) @ s_k + g_prev)


def _mm2_recursive(gains, a, s_k, s_km1, s_km2, u_km1, u_km2):
    T = gains.T
    m = gains.s_gain.shape[0]
    mid = 3.0 * np.eye(m) + 2.0 * T * gains.drift_from_s
    return (-(1.0 / T) * gains.gain @ (
        _lead(gains, 3.0 - a) @ s_k - mid @ s_km1 + _lead(gains, 1.0) @ s_km2)
        + 2.0 * u_km1 - u_km2)


def _mm2_estimate(gains, a, s_k, s_km1, s_km2, u_km1, u_km2):
    g1 = reconstruct_g_prev(gains, s_k, s_km1, u_km1)
    g2 = reconstruct_g_prev(gains, s_km1, s_km2, u_km2)
    T = gains.T
    return -(1.0 / T) * gains.gain @ (
        _lead(gains, 1.0 - a) @ s_k + 2.0 * g1 - g2)


# spec-facing aliases: single steps of the two proposed laws and the two
# deadbeat baselines, operating on an explicit state object

def step_mm1(state: ControllerState, s_k) -> np.ndarray:
    assert state.kind == "mm1"
    return state.step(s_k)


def step_mm2(state: ControllerState, s_k) -> np.ndarray:
    assert state.kind == "mm2"
    return state.step(s_k)


def step_m1(state: ControllerState, s_k) -> np.ndarray:
    assert state.kind == "m1"
    return state.step(s_k)


def step_m2(state: ControllerState, s_k) -> np.ndarray:
    assert state.kind == "m2"
    return state.step(s_k)
