"""Velocity command laws: split a desired string speed between channels.

The desired output velocity is decomposed as x_dot_des = x_dot_theta +
x_dot_phi, one share for twisting and one for winching.  The winch channel
is trivially linear (phi_dot = x_dot_phi / r_w).  The twist channel inverts
the displacement model around the current state:

    theta_dot = x_dot_theta * sqrt(Lc^2 - theta^2 r^2) / (theta r^2)
                - theta * r_dot / r

with r the current variable radius.  That law divides by theta, so commands
below a configurable twist threshold are rejected, rerouted, or saturated.
r_dot has no closed form that avoids an algebraic loop (the radius rate
depends on the command being computed), so it is estimated by a backward
difference over the control step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ActuatorState
from .errors import DomainError, ParameterError, SingularityError

DEFAULT_THETA_MIN = 1.0  # [rad] below this the twist channel has ~zero gain

WINCH_ONLY = "winch_only"
TWIST_ONLY = "twist_only"
WINCH_THEN_TWIST = "winch_then_twist"
PROPORTIONAL = "proportional"


@dataclass(frozen=True)
class AllocationPolicy:
    """How to split desired string velocity between twist and winch.

    winch_then_twist sends everything to the winch until the total
    contraction passes switch_contraction, then everything to twisting;
    proportional sends a fixed twist_fraction to the twist channel.
    """

    mode: str
    switch_contraction: float = 0.0
    twist_fraction: float = 0.0

    def __post_init__(self):
        if self.mode not in (WINCH_ONLY, TWIST_ONLY, WINCH_THEN_TWIST, PROPORTIONAL):
            raise ParameterError(f"unknown allocation mode {self.mode!r}")
        if not (math.isfinite(self.switch_contraction) and self.switch_contraction >= 0):
            raise ParameterError(
                f"switch_contraction must be >= 0, got {self.switch_contraction}")
        if not (0.0 <= self.twist_fraction <= 1.0):
            raise ParameterError(
                f"twist_fraction out of range [0, 1], got {self.twist_fraction}")

    @classmethod
    def winch_only(cls) -> "AllocationPolicy":
        return cls(WINCH_ONLY)

    @classmethod
    def twist_only(cls) -> "AllocationPolicy":
        return cls(TWIST_ONLY)

    @classmethod
    def winch_then_twist(cls, switch_contraction: float) -> "AllocationPolicy":
        return cls(WINCH_THEN_TWIST, switch_contraction=switch_contraction)

    @classmethod
    def proportional(cls, twist_fraction: float) -> "AllocationPolicy":
        return cls(PROPORTIONAL, twist_fraction=twist_fraction)


@dataclass(frozen=True)
class VelocityAllocation:
    x_dot_theta: float
    x_dot_phi: float


@dataclass(frozen=True)
class VelocityCommand:
    """Effective-rate command; saturated marks that a singularity or rate
    limit rule altered the raw allocation."""

    theta_dot_eff: float
    phi_dot_eff: float
    saturated: bool = False


def allocate(x_dot_des: float, policy: AllocationPolicy,
             state: ActuatorState) -> VelocityAllocation:
    """Split x_dot_des per policy; the two shares always sum to it exactly."""
    if policy.mode == WINCH_ONLY:
        x_theta = 0.0
    elif policy.mode == TWIST_ONLY:
        x_theta = x_dot_des
    elif policy.mode == WINCH_THEN_TWIST:
        x_theta = 0.0 if state.total_contraction < policy.switch_contraction else x_dot_des
    else:  # PROPORTIONAL
        x_theta = policy.twist_fraction * x_dot_des
    x_phi = x_dot_des - x_theta
    # re-project the twist share so the rounded shares sum back exactly
    return VelocityAllocation(x_dot_theta=x_dot_des - x_phi, x_dot_phi=x_phi)


def twist_velocity_command(x_dot_theta: float, state: ActuatorState,
                           r_dot: float = 0.0, *,
                           theta_min: float = DEFAULT_THETA_MIN) -> float:
    """Effective twist rate producing string velocity x_dot_theta.

    Raises SingularityError at or below theta_min, where the inversion
    divides by a vanishing gain.
    """
    if theta_min <= 0:
        raise ParameterError(f"theta_min must be > 0, got {theta_min}")
    theta = state.theta_eff
    if theta <= theta_min:
        raise SingularityError(
            f"twist command undefined at theta_eff={theta:.6g} rad "
            f"(threshold {theta_min:.6g} rad)")
    r = state.variable_radius
    if theta * r >= state.contracted_length:
        raise DomainError("state violates the overtwist guard")
    return x_dot_theta * state.total_length / (theta * r * r) - theta * r_dot / r


def winch_velocity_command(x_dot_phi: float, winch_radius: float) -> float:
    """Effective winch rate producing string velocity x_dot_phi."""
    if not (winch_radius > 0):
        raise ParameterError(f"winch radius must be > 0, got {winch_radius}")
    return x_dot_phi / winch_radius


def r_var_rate(prev: ActuatorState | None, curr: ActuatorState, dt: float) -> float:
    """Backward-difference estimate of the variable-radius rate.

    Returns 0 on the first step (prev is None), which self-corrects after
    one control period.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if prev is None:
        return 0.0
    return (curr.variable_radius - prev.variable_radius) / dt


def velocity_command(x_dot_des: float, policy: AllocationPolicy,
                     state: ActuatorState, winch_radius: float,
                     r_dot: float = 0.0, *,
                     theta_min: float = DEFAULT_THETA_MIN,
                     theta_dot_max: float | None = None) -> VelocityCommand:
    """Full command law: allocate, invert each channel, handle singularity.

    Below theta_min a winch_then_twist policy reroutes the twist share to
    the winch; other policies either saturate at theta_dot_max (when
    configured) or raise SingularityError.  Commands above theta_dot_max
    are clipped.  Either intervention sets the saturated flag.
    """
    alloc = allocate(x_dot_des, policy, state)
    x_theta, x_phi = alloc.x_dot_theta, alloc.x_dot_phi
    saturated = False

    if x_theta == 0.0:
        theta_dot = 0.0
    elif state.theta_eff <= theta_min:
        if policy.mode == WINCH_THEN_TWIST:
            x_phi += x_theta
            theta_dot = 0.0
            saturated = True
        elif theta_dot_max is not None:
            theta_dot = math.copysign(theta_dot_max, x_theta)
            saturated = True
        else:
            raise SingularityError(
                f"twist share requested at theta_eff={state.theta_eff:.6g} rad "
                f"(threshold {theta_min:.6g} rad) and no rate limit configured")
    else:
        theta_dot = twist_velocity_command(x_theta, state, r_dot,
                                           theta_min=theta_min)
        if theta_dot_max is not None and abs(theta_dot) > theta_dot_max:
            theta_dot = math.copysign(theta_dot_max, theta_dot)
            saturated = True

    phi_dot = winch_velocity_command(x_phi, winch_radius)
    return VelocityCommand(theta_dot_eff=theta_dot, phi_dot_eff=phi_dot,
                           saturated=saturated)
