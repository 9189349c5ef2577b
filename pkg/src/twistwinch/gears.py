"""Motor <-> effective angle algebra for the turret/winch gear trains.

Two motors drive the actuator: one spins the turret that twists the string,
the other spins a through shaft that drives the winch via bevel gears mounted
on the turret.  Because the winch rides on the turret, twisting also carries
the winch around, so the effective winch rotation sees a coupling term from
the twist channel:

    theta_eff = theta2 * s_b / N_theta
    phi_eff   = (theta1 * s_a + theta_eff) / N_phi

where s_a = (-1)^(a+1) and s_b = (-1)^(b+1) are parity signs set by the gear
counts a and b (each extra mesh flips the direction).  Both maps are linear,
so the velocity relations are the same algebra applied to rates, and the
inverses are closed-form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class GearTrain:
    """Gear counts and reduction ratios of both drive paths.

    Defaults model a rig with 2:1 reductions on both the turret drive and
    the bevel stage, with two meshes in each path.
    """

    bevel_count: int = 2
    bevel_ratio: float = 2.0
    turret_count: int = 2
    turret_ratio: float = 2.0

    def __post_init__(self):
        if not (isinstance(self.bevel_count, int) and self.bevel_count >= 1):
            raise ParameterError(f"bevel_count must be an integer >= 1, got {self.bevel_count}")
        if not (isinstance(self.turret_count, int) and self.turret_count >= 1):
            raise ParameterError(f"turret_count must be an integer >= 1, got {self.turret_count}")
        if not (math.isfinite(self.bevel_ratio) and self.bevel_ratio > 0):
            raise ParameterError(f"bevel_ratio must be > 0, got {self.bevel_ratio}")
        if not (math.isfinite(self.turret_ratio) and self.turret_ratio > 0):
            raise ParameterError(f"turret_ratio must be > 0, got {self.turret_ratio}")

    @property
    def bevel_sign(self) -> float:
        return -1.0 if self.bevel_count % 2 == 0 else 1.0

    @property
    def turret_sign(self) -> float:
        return -1.0 if self.turret_count % 2 == 0 else 1.0


@dataclass(frozen=True)
class MotorAngles:
    theta1: float
    theta2: float


@dataclass(frozen=True)
class EffectiveRates:
    phi_dot_eff: float
    theta_dot_eff: float


def effective_angles(motors: MotorAngles, train: GearTrain) -> tuple[float, float]:
    """Map motor angles to (phi_eff, theta_eff)."""
    theta_eff = motors.theta2 * train.turret_sign / train.turret_ratio
    phi_eff = (motors.theta1 * train.bevel_sign + theta_eff) / train.bevel_ratio
    return phi_eff, theta_eff


def motor_angles(phi_eff: float, theta_eff: float, train: GearTrain) -> MotorAngles:
    """Closed-form inverse of effective_angles."""
    theta2 = theta_eff * train.turret_ratio * train.turret_sign
    theta1 = (phi_eff * train.bevel_ratio - theta_eff) * train.bevel_sign
    return MotorAngles(theta1=theta1, theta2=theta2)


def motor_velocities(rates: EffectiveRates, train: GearTrain) -> tuple[float, float]:
    """Motor rates producing the requested effective rates (same linear map
    as the angles, applied to velocities)."""
    theta1_dot = (train.bevel_ratio * rates.phi_dot_eff - rates.theta_dot_eff) * train.bevel_sign
    theta2_dot = train.turret_ratio * rates.theta_dot_eff * train.turret_sign
    return theta1_dot, theta2_dot


def effective_rates(theta1_dot: float, theta2_dot: float, train: GearTrain) -> EffectiveRates:
    """Inverse of motor_velocities."""
    theta_dot_eff = theta2_dot * train.turret_sign / train.turret_ratio
    phi_dot_eff = (theta1_dot * train.bevel_sign + theta_dot_eff) / train.bevel_ratio
    return EffectiveRates(phi_dot_eff=phi_dot_eff, theta_dot_eff=theta_dot_eff)
