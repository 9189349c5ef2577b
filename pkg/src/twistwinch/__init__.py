"""twistwinch: modeling toolkit for a hybrid twisted-string + winch actuator.

The actuator shortens a string two ways at once: twisting it into a helix
(high force, short stroke, nonlinear gain) and winding it onto a winch
(long stroke, constant gain).  This package provides the displacement
model with its implicit variable-radius solve, the motor/effective-angle
gear algebra, velocity command laws, a quasi-static force model, and a
scenario simulator with a config-driven CLI.

Quick start:

    from twistwinch import (StringParams, WinchGeometry, LoadCondition,
                            solve_total_contraction)

    params = StringParams(unloaded_length=0.5, radius=0.001)  # rigid
    winch = WinchGeometry(winch_radius=0.005)
    state = solve_total_contraction(params, winch, LoadCondition(),
                                    theta_eff=150.0, phi_eff=10.0)
    print(state.total_contraction)
"""

from .control import (AllocationPolicy, VelocityAllocation, VelocityCommand,
                      allocate, r_var_rate, twist_velocity_command,
                      velocity_command, winch_velocity_command)
from .core import (ActuatorState, LoadCondition, StringParams, WinchGeometry,
                   axial_length, contracted_length, loaded_length,
                   max_twist_angle, solve_total_contraction, twist_contraction)
from .errors import (ConvergenceError, DomainError, ParameterError, ParseError,
                     ScenarioAborted, SingularityError, TwistWinchError)
from .forces import (ForceBreakdown, exit_angle, force_breakdown, helix_angle,
                     total_force, twist_force, winch_force)
from .gears import (EffectiveRates, GearTrain, MotorAngles, effective_angles,
                    effective_rates, motor_angles, motor_velocities)
from .simulate import (Phase, RatioSample, Scenario, SweepPoint, TraceSample,
                       force_table, ratio_map, run, transmission_ratio,
                       velocity_sweep)
from .config import RangeSpec, RunConfig, parse_config, serialize_config

__version__ = "0.1.0"

__all__ = [
    # core types and kinematics
    "StringParams", "WinchGeometry", "LoadCondition", "ActuatorState",
    "contracted_length", "twist_contraction", "loaded_length",
    "axial_length", "solve_total_contraction", "max_twist_angle",
    # gear algebra
    "GearTrain", "MotorAngles", "EffectiveRates",
    "effective_angles", "motor_angles", "motor_velocities", "effective_rates",
    # velocity control
    "AllocationPolicy", "VelocityAllocation", "VelocityCommand",
    "allocate", "twist_velocity_command", "winch_velocity_command",
    "r_var_rate", "velocity_command",
    # forces
    "ForceBreakdown", "helix_angle", "twist_force", "exit_angle",
    "winch_force", "total_force", "force_breakdown",
    # simulation
    "Phase", "Scenario", "TraceSample", "SweepPoint", "RatioSample",
    "run", "transmission_ratio", "velocity_sweep", "force_table", "ratio_map",
    # config
    "RunConfig", "RangeSpec", "parse_config", "serialize_config",
    # errors
    "TwistWinchError", "ParameterError", "ParseError", "DomainError",
    "SingularityError", "ConvergenceError", "ScenarioAborted",
]
