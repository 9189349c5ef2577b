"""Exception taxonomy for the toolkit.

Every failure path raises one of these; callers never see bare ValueError
or a NaN/inf smuggled through a return value.
"""

from __future__ import annotations


class TwistWinchError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(TwistWinchError):
    """A constructor or config value violates a type invariant."""


class ParseError(TwistWinchError):
    """Config text could not be parsed; message carries line context."""


class DomainError(TwistWinchError):
    """Inputs are outside the model's valid domain (overtwist, fully
    wound string, negative twist angle, rigid string asked to stretch)."""


class SingularityError(DomainError):
    """Twist-velocity command requested at or below the zero-twist
    singularity threshold, with no saturation fallback configured."""


class ConvergenceError(TwistWinchError):
    """The implicit solve did not reach its residual target."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e} m after "
                         f"{iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class ScenarioAborted(TwistWinchError):
    """A scenario run hit a model error mid-trajectory.

    Carries the partial trace so failures stay visible in output data.
    """

    def __init__(self, cause: TwistWinchError, t: float, samples: list):
        super().__init__(f"scenario aborted at t={t:.6g} s: {cause}")
        self.cause = cause
        self.t = t
        self.samples = samples
