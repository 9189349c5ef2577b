"""Discrete-time scenario runner and sweep/grid evaluators.

A Scenario is a list of phases integrated with explicit Euler on the
effective angles (the displacement model itself is algebraic, so the
integrator only shapes the commanded trajectory, never the state
consistency).  Phases either hold, command constant effective rates, or
command a desired string velocity resolved through the control law each
step.  Braking is a zero commanded rate.

A run aborts with ScenarioAborted (carrying the partial trace) the moment
an input leaves the model domain, so failures stay visible in output data
instead of being clamped away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import control
from .control import AllocationPolicy, r_var_rate, velocity_command
from .core import (ActuatorState, LoadCondition, StringParams, WinchGeometry,
                   axial_length, solve_total_contraction)
from .errors import ParameterError, ScenarioAborted, TwistWinchError
from .forces import ForceBreakdown, force_breakdown
from .gears import GearTrain, motor_angles

HOLD = "hold"
RATES = "rates"
VELOCITY = "velocity"

RATIO_STEP = 1e-4  # [rad] finite-difference step for transmission ratios


@dataclass(frozen=True)
class Phase:
    """One timeline segment: hold, constant effective rates, or a desired
    string velocity tracked through the command law."""

    kind: str
    duration: float
    theta_dot: float = 0.0
    phi_dot: float = 0.0
    x_dot: float = 0.0

    def __post_init__(self):
        if self.kind not in (HOLD, RATES, VELOCITY):
            raise ParameterError(f"unknown phase kind {self.kind!r}")
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ParameterError(f"phase duration must be > 0, got {self.duration}")
        for name in ("theta_dot", "phi_dot", "x_dot"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"phase {name} must be finite")

    @classmethod
    def hold(cls, duration: float) -> "Phase":
        return cls(HOLD, duration)

    @classmethod
    def rates(cls, duration: float, theta_dot: float = 0.0,
              phi_dot: float = 0.0) -> "Phase":
        return cls(RATES, duration, theta_dot=theta_dot, phi_dot=phi_dot)

    @classmethod
    def velocity(cls, duration: float, x_dot: float) -> "Phase":
        return cls(VELOCITY, duration, x_dot=x_dot)


@dataclass(frozen=True)
class Scenario:
    params: StringParams
    winch: WinchGeometry
    train: GearTrain
    load: LoadCondition
    policy: AllocationPolicy
    phases: tuple[Phase, ...]
    dt: float = 0.001
    theta_min: float = control.DEFAULT_THETA_MIN
    theta_dot_max: float | None = None
    initial_twist: float = 0.0
    initial_winch: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if not self.phases:
            raise ParameterError("scenario needs at least one phase")
        if not all(isinstance(p, Phase) for p in self.phases):
            raise ParameterError("phases must be Phase instances")


@dataclass(frozen=True)
class TraceSample:
    """One trace row; f_total stays None outside force scenarios."""

    t: float
    theta_eff: float
    phi_eff: float
    theta1: float
    theta2: float
    total_contraction: float
    x_dot: float
    ratio_twist: float
    ratio_winch: float
    f_total: float | None = None


def transmission_ratio(state: ActuatorState, winch: WinchGeometry,
                       params: StringParams,
                       step: float = RATIO_STEP) -> tuple[float, float]:
    """Incremental displacement per radian on each channel [m/rad].

    Twist channel: central finite difference of the displacement solve in
    theta_eff (one-sided at the theta_eff = 0 boundary); a twist
    perturbation leaves the contracted length untouched, so the state's
    solved value is reused directly.  Winch channel: finite difference of
    the take-up term at the state's contracted length, which isolates the
    drum payout and returns the winch radius independent of twist.
    """
    lc = state.contracted_length
    r0 = params.radius
    if state.theta_eff >= step:
        x_hi = axial_length(lc, r0, state.theta_eff + step)
        x_lo = axial_length(lc, r0, state.theta_eff - step)
        twist = (x_lo - x_hi) / (2.0 * step)
    else:
        x_hi = axial_length(lc, r0, state.theta_eff + step)
        twist = (state.total_length - x_hi) / step

    base = lc - state.total_length
    rw = winch.winch_radius
    d_hi = base + rw * (state.phi_eff + step)
    d_lo = base + rw * (state.phi_eff - step)
    return twist, (d_hi - d_lo) / (2.0 * step)


def _phase_steps(duration: float, dt: float):
    """Yield integration step sizes covering the duration exactly."""
    ratio = duration / dt
    n = round(ratio)
    if n >= 1 and abs(ratio - n) < 1e-9:
        remainder = 0.0
    else:
        n = math.floor(ratio)
        remainder = duration - n * dt
    for _ in range(n):
        yield dt
    if remainder > dt * 1e-9:
        yield remainder


def run(scenario: Scenario) -> list[TraceSample]:
    """Integrate a scenario and return its trace, one sample per step.

    Raises ScenarioAborted (partial trace attached) when the trajectory
    leaves the model domain or a solve fails to converge.
    """
    sc = scenario
    samples: list[TraceSample] = []
    theta = sc.initial_twist
    phi = sc.initial_winch
    t = 0.0
    r_dot = 0.0

    def solve(th, ph):
        return solve_total_contraction(sc.params, sc.winch, sc.load, th, ph)

    def emit(state: ActuatorState, x_dot: float):
        tw, wn = transmission_ratio(state, sc.winch, sc.params)
        motors = motor_angles(state.phi_eff, state.theta_eff, sc.train)
        samples.append(TraceSample(
            t=t, theta_eff=state.theta_eff, phi_eff=state.phi_eff,
            theta1=motors.theta1, theta2=motors.theta2,
            total_contraction=state.total_contraction, x_dot=x_dot,
            ratio_twist=tw, ratio_winch=wn))

    state = solve(theta, phi)
    emit(state, 0.0)

    for phase in sc.phases:
        for h in _phase_steps(phase.duration, sc.dt):
            try:
                if phase.kind == HOLD:
                    theta_dot, phi_dot = 0.0, 0.0
                elif phase.kind == RATES:
                    theta_dot, phi_dot = phase.theta_dot, phase.phi_dot
                else:
                    cmd = velocity_command(
                        phase.x_dot, sc.policy, state, sc.winch.winch_radius,
                        r_dot, theta_min=sc.theta_min,
                        theta_dot_max=sc.theta_dot_max)
                    theta_dot, phi_dot = cmd.theta_dot_eff, cmd.phi_dot_eff
                theta += theta_dot * h
                phi += phi_dot * h
                t += h
                new_state = solve(theta, phi)
            except TwistWinchError as exc:
                raise ScenarioAborted(exc, t, samples) from exc
            r_dot = r_var_rate(state, new_state, h)
            emit(new_state, (new_state.total_contraction - state.total_contraction) / h)
            state = new_state

    return samples


@dataclass(frozen=True)
class SweepPoint:
    rate: float    # commanded effective rate [rad/s]
    x_dot: float   # model-predicted string velocity [m/s]


def velocity_sweep(base: Scenario, kind: str, rates: list[float],
                   duration: float = 0.5) -> list[SweepPoint]:
    """Run one short constant-rate scenario per commanded rate.

    kind selects the driven channel ("twist" or "winch"); the predicted
    string velocity is the trace displacement differenced over the run.
    """
    if kind not in ("twist", "winch"):
        raise ParameterError(f"sweep kind must be 'twist' or 'winch', got {kind!r}")
    points = []
    for rate in rates:
        if kind == "twist":
            phase = Phase.rates(duration, theta_dot=rate)
        else:
            phase = Phase.rates(duration, phi_dot=rate)
        trace = run(replace(base, phases=(phase,)))
        span = trace[-1].t - trace[0].t
        points.append(SweepPoint(
            rate=rate,
            x_dot=(trace[-1].total_contraction - trace[0].total_contraction) / span))
    return points


@dataclass(frozen=True)
class ForceSample:
    theta: float
    tau_w: float
    breakdown: ForceBreakdown


def force_table(params: StringParams, winch: WinchGeometry, held_length: float,
                thetas: list[float], torques: list[float]) -> list[ForceSample]:
    """Evaluate the quasi-static force model over a twist x torque grid."""
    rows = []
    for theta in thetas:
        for tau in torques:
            rows.append(ForceSample(
                theta=theta, tau_w=tau,
                breakdown=force_breakdown(params, winch, held_length, theta, tau)))
    return rows


@dataclass(frozen=True)
class RatioSample:
    theta_eff: float
    phi_eff: float
    ratio_twist: float
    ratio_winch: float


def ratio_map(params: StringParams, winch: WinchGeometry, load: LoadCondition,
              thetas: list[float], phis: list[float]) -> list[RatioSample]:
    """Transmission-ratio map over a grid of effective angles."""
    rows = []
    for phi in phis:
        for theta in thetas:
            state = solve_total_contraction(params, winch, load, theta, phi)
            tw, wn = transmission_ratio(state, winch, params)
            rows.append(RatioSample(theta_eff=theta, phi_eff=phi,
                                    ratio_twist=tw, ratio_winch=wn))
    return rows
