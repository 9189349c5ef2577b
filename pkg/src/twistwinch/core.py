"""Displacement model of the hybrid twisted-string + winch actuator.

A string of contracted (reference) length Lc twisted through an angle theta
wraps into a helix and its axial length shrinks to

    X = sqrt(Lc^2 - theta^2 r^2)

With a packing-dependent radius r_var = r0 * sqrt(Lc / X) this relation is
implicit in X; the solver below resolves it.  Winding the string onto a winch
of radius r_w adds r_w * phi of take-up and shortens the free length, so the
total output displacement is

    dX_total = Lc - X + r_w * phi

where Lc itself depends on load and winch payout (see loaded_length).

All quantities are SI (m, rad, N); unit conversion belongs to the CLI layer.
All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, ParameterError

# Fraction of the solvable twist range held back as a safety margin.  The
# implicit radius coupling loses its solution at a fold; commands close to it
# are rejected rather than solved.
OVERTWIST_MARGIN = 0.01

# Largest theta with a solution satisfies theta * r0 = FOLD_COEFF * Lc.
FOLD_COEFF = math.sqrt(2.0 / (3.0 * math.sqrt(3.0)))

_DAMPING = 0.5
_MAX_FIXED_POINT_ITER = 200
_STEP_TOL = 1e-13          # fixed-point stop threshold on |f(x) - x|
_RESIDUAL_GUARANTEE = 1e-9  # residual bound promised to callers [m]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


@dataclass(frozen=True)
class StringParams:
    """Geometry and material of the string.

    stiffness is the axial spring constant [N/m]; None selects rigid mode,
    where the stretch term is dropped entirely (an explicit flag rather than
    a huge number, to keep the arithmetic well conditioned).
    """

    unloaded_length: float
    radius: float = 0.001
    stiffness: float | None = None

    def __post_init__(self):
        _require(math.isfinite(self.unloaded_length) and self.unloaded_length > 0,
                 f"string unloaded_length must be > 0, got {self.unloaded_length}")
        _require(math.isfinite(self.radius) and self.radius > 0,
                 f"string radius must be > 0, got {self.radius}")
        if self.stiffness is not None:
            _require(math.isfinite(self.stiffness) and self.stiffness > 0,
                     f"string stiffness must be > 0 or None (rigid), got {self.stiffness}")

    @property
    def is_rigid(self) -> bool:
        return self.stiffness is None


@dataclass(frozen=True)
class WinchGeometry:
    """Winch drum radius, distance to the exit bushing, and the sliding
    friction coefficient between string and bushing."""

    winch_radius: float
    bushing_distance: float = 0.050
    friction_coeff: float = 0.2

    def __post_init__(self):
        _require(math.isfinite(self.winch_radius) and self.winch_radius > 0,
                 f"winch_radius must be > 0, got {self.winch_radius}")
        _require(math.isfinite(self.bushing_distance) and self.bushing_distance > 0,
                 f"bushing_distance must be > 0, got {self.bushing_distance}")
        _require(math.isfinite(self.friction_coeff) and 0.0 <= self.friction_coeff < 1.0,
                 f"friction coefficient out of range (need 0 <= mu < 1), got {self.friction_coeff}")


@dataclass(frozen=True)
class LoadCondition:
    """External load: axial pulling force and twisting moment on the string."""

    axial_force: float = 0.0
    twist_moment: float = 0.0

    def __post_init__(self):
        _require(math.isfinite(self.axial_force) and self.axial_force >= 0,
                 f"axial_force must be >= 0, got {self.axial_force}")
        _require(math.isfinite(self.twist_moment) and self.twist_moment >= 0,
                 f"twist_moment must be >= 0, got {self.twist_moment}")


NO_LOAD = LoadCondition()


@dataclass(frozen=True)
class ActuatorState:
    """Solved kinematic state at one (theta_eff, phi_eff) input pair.

    contracted_length  Lc, the loaded, winch-adjusted reference length [m]
    total_length       X, axial length of the twisted section [m]
    variable_radius    effective helix radius r0*sqrt(Lc/X) [m]
    total_contraction  output displacement Lc - X + r_w*phi_eff [m]
    """

    theta_eff: float
    phi_eff: float
    contracted_length: float
    total_length: float
    variable_radius: float
    total_contraction: float


def max_twist_angle(contracted: float, r0: float) -> float:
    """Largest accepted twist angle for a given contracted length.

    The implicit relation stops having a solution at
    theta = FOLD_COEFF * Lc / r0; a 1% margin below that is enforced so
    solves never start in the ill-conditioned neighborhood of the fold.
    """
    return (1.0 - OVERTWIST_MARGIN) * FOLD_COEFF * contracted / r0


def contracted_length(contracted: float, r0: float, theta: float) -> float:
    """Axial length of a twisted string at fixed helix radius r0.

    Evaluates sqrt(Lc^2 - theta^2 r0^2).  Raises DomainError at or past
    theta * r0 = Lc, where the helix geometry degenerates (overtwist).
    """
    _require(contracted > 0, f"contracted length must be > 0, got {contracted}")
    _require(r0 > 0, f"radius must be > 0, got {r0}")
    if theta < 0:
        raise DomainError(f"twist angle must be >= 0, got {theta}")
    s = theta * r0
    if s >= contracted:
        raise DomainError(
            f"overtwist: theta*r = {s:.6g} m reaches the contracted length "
            f"{contracted:.6g} m")
    return math.sqrt(contracted * contracted - s * s)


def axial_length(contracted: float, r0: float, theta: float) -> float:
    """Solve X = sqrt(Lc^2 - theta^2 r_var^2) with r_var = r0*sqrt(Lc/X).

    Damped fixed-point iteration (damping 0.5) started from the fixed-radius
    value, falling back to bisection on the equivalent scalar residual when
    the iteration stalls.  Guaranteed residual below 1e-9 m on return.
    """
    _require(contracted > 0, f"contracted length must be > 0, got {contracted}")
    _require(r0 > 0, f"radius must be > 0, got {r0}")
    if theta == 0.0:
        return contracted
    if theta < 0.0:
        raise DomainError(f"twist angle must be >= 0, got {theta}")
    limit = max_twist_angle(contracted, r0)
    if theta >= limit:
        raise DomainError(
            f"overtwist: twist angle {theta:.6g} rad exceeds the solvable "
            f"limit {limit:.6g} rad for contracted length {contracted:.6g} m")

    a = theta * theta * r0 * r0 * contracted  # theta^2 r0^2 Lc
    lc2 = contracted * contracted

    def step(x: float) -> float:
        arg = lc2 - a / x
        return math.sqrt(arg) if arg > 0.0 else -1.0

    # Fixed-radius value bounds the true root from above within the domain.
    x = math.sqrt(lc2 - theta * theta * r0 * r0)
    iterations = 0
    for iterations in range(1, _MAX_FIXED_POINT_ITER + 1):
        fx = step(x)
        if fx < 0.0:
            break  # iterate left the bracket; bisection will finish
        if abs(fx - x) < _STEP_TOL:
            return fx
        x = x + _DAMPING * (fx - x)

    # Bisection fallback over [argmin g, Lc], where the physical root of
    # g(X) = X^2 - Lc^2 + a/X is bracketed by construction.
    lo = (0.5 * a) ** (1.0 / 3.0)
    hi = contracted
    if lo * lo * 3.0 - lc2 >= 0.0:  # g(lo) >= 0: no root (fold crossed)
        raise DomainError(
            f"overtwist: no axial-length solution for twist angle {theta:.6g} rad")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * mid - lc2 + a / mid > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < _STEP_TOL:
            break
    x = 0.5 * (lo + hi)
    residual = abs(step(x) - x) if step(x) > 0 else math.inf
    if residual > _RESIDUAL_GUARANTEE:
        raise ConvergenceError("axial-length solve stalled", residual,
                               iterations + 200)
    return x


def twist_contraction(contracted: float, r0: float, theta: float) -> float:
    """Length lost to twisting alone: Lc - X with the variable-radius X."""
    return contracted - axial_length(contracted, r0, theta)


def loaded_length(params: StringParams, load: LoadCondition, phi_eff: float,
                  winch_radius: float) -> float:
    """Contracted reference length after load stretch and winch take-up.

    Lc = L + F_i/K - r_w*phi  with fiber tension F_i = hypot(tau/r0, F_x).
    Rigid mode drops the stretch term.  Raises DomainError when the winch
    has consumed the whole string (Lc <= 0).
    """
    _require(winch_radius > 0, f"winch radius must be > 0, got {winch_radius}")
    if params.is_rigid:
        lc = params.unloaded_length - winch_radius * phi_eff
    else:
        tension = math.hypot(load.twist_moment / params.radius, load.axial_force)
        lc = params.unloaded_length + tension / params.stiffness - winch_radius * phi_eff
    if lc <= 0.0:
        raise DomainError(
            f"string fully wound: winch take-up {winch_radius * phi_eff:.6g} m "
            f"consumes the available length")
    return lc


def solve_total_contraction(params: StringParams, winch: WinchGeometry,
                            load: LoadCondition, theta_eff: float,
                            phi_eff: float) -> ActuatorState:
    """Full state solve for one (theta_eff, phi_eff) input pair.

    Resolves the load-dependent contracted length, the implicit axial
    length / variable radius coupling, and the total output displacement.

    Raises:
        DomainError: negative twist, overtwist, or fully wound string.
        ConvergenceError: the implicit solve missed its residual target
            (carries residual and iteration count).
    """
    if not math.isfinite(theta_eff) or not math.isfinite(phi_eff):
        raise DomainError("effective angles must be finite")
    if theta_eff < 0:
        raise DomainError(f"twist angle must be >= 0, got {theta_eff}")
    lc = loaded_length(params, load, phi_eff, winch.winch_radius)
    x = axial_length(lc, params.radius, theta_eff)
    r_var = params.radius * math.sqrt(lc / x)
    return ActuatorState(
        theta_eff=theta_eff,
        phi_eff=phi_eff,
        contracted_length=lc,
        total_length=x,
        variable_radius=r_var,
        total_contraction=lc - x + winch.winch_radius * phi_eff,
    )
