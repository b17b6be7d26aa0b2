"""Exception taxonomy shared across modules.

The CLI maps these onto its stable exit codes: configuration or parse
problems -> 2, violated structural assumptions -> 3, numerical divergence
during simulation -> 4.
"""


class ConfigError(ValueError):
    """Bad user input: file syntax, inconsistent parameters, bad ranges."""


class AssumptionViolation(RuntimeError):
    """A structural requirement of the design does not hold (e.g. the
    surface-to-input coupling is singular)."""


class DivergenceError(RuntimeError):
    """Closed-loop state escaped the overflow guard."""

    def __init__(self, step: int, norm: float):
        super().__init__(f"state norm {norm:.3e} exceeded guard at step {step}")
        self.step = step
        self.norm = norm


class DisturbanceRangeError(ValueError):
    """Disturbance evaluated outside its defined time range."""
