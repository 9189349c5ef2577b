"""Quasi-static output force with the string end held fixed.

Twisting a held string cannot shorten it, so the fibers stretch from X to
the helix arc length sqrt(X^2 + theta^2 r0^2) and pull along the helix
angle alpha:

    F_twist = K * (sqrt(X^2 + theta^2 r0^2) - X) * sin(alpha)

The held length keeps the radius at r0.  The winch contributes torque
through the drum, derated by string-on-bushing sliding friction at the
turret exit:

    F_winch = (tau_w / r_w) * (1 - sin(gamma) * mu),  tan(gamma) = r_w / d

Total output force is the sum of both channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import StringParams, WinchGeometry
from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class ForceBreakdown:
    f_twist: float
    f_winch: float
    f_total: float
    helix_angle: float
    exit_angle: float


def helix_angle(held_length: float, theta: float, r0: float) -> float:
    """Angle between a twisted strand and the string axis.

    sin(alpha) = theta*r0 / sqrt(X^2 + theta^2 r0^2), zero when untwisted
    and approaching pi/2 as the twist count grows.
    """
    if held_length <= 0:
        raise ParameterError(f"held length must be > 0, got {held_length}")
    if theta < 0:
        raise ParameterError(f"twist angle must be >= 0, got {theta}")
    s = theta * r0
    return math.asin(s / math.hypot(held_length, s)) if s > 0 else 0.0


def twist_force(params: StringParams, held_length: float, theta: float) -> float:
    """Axial force from twisting a string whose output end is fixed.

    Requires finite stiffness: a rigid string held at both ends cannot
    stretch, so rigid mode is a domain error here.
    """
    if params.is_rigid:
        raise DomainError("twist force needs finite stiffness; a rigid "
                          "held string cannot stretch")
    if held_length <= 0:
        raise DomainError(f"invalid geometry: held length must be > 0, "
                          f"got {held_length}")
    if theta < 0:
        raise DomainError(f"twist angle must be >= 0, got {theta}")
    s = theta * params.radius
    arc = math.hypot(held_length, s)
    return params.stiffness * (arc - held_length) * (s / arc if arc > 0 else 0.0)


def exit_angle(winch: WinchGeometry) -> float:
    """Angle of the string leaving the winch against the exit-bushing axis."""
    return math.atan(winch.winch_radius / winch.bushing_distance)


def winch_force(tau_w: float, winch: WinchGeometry) -> float:
    """Axial force from winch torque, derated by bushing friction.

    Linear in torque and never above the frictionless tau_w / r_w.
    """
    if not (math.isfinite(tau_w) and tau_w >= 0):
        raise ParameterError(f"winch torque must be >= 0, got {tau_w}")
    gamma = exit_angle(winch)
    return (tau_w / winch.winch_radius) * (1.0 - math.sin(gamma) * winch.friction_coeff)


def total_force(f_twist: float, f_winch: float) -> float:
    return f_twist + f_winch


def force_breakdown(params: StringParams, winch: WinchGeometry,
                    held_length: float, theta: float, tau_w: float) -> ForceBreakdown:
    """Evaluate both channels at one grid point and sum them."""
    ft = twist_force(params, held_length, theta)
    fw = winch_force(tau_w, winch)
    return ForceBreakdown(
        f_twist=ft,
        f_winch=fw,
        f_total=total_force(ft, fw),
        helix_angle=helix_angle(held_length, theta, params.radius),
        exit_angle=exit_angle(winch),
    )
