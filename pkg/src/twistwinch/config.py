"""Config file parsing, validation, and canonical serialization.

The format is plain line-based key = value text.  Every physical value
carries an explicit unit suffix (bare numbers are accepted only for
dimensionless quantities such as gear ratios, fractions, and counts);
degrees and millimetres are welcome at this boundary, everything is
converted to SI on the way in.  Unknown keys are rejected.  `phase` may
repeat to build a timeline; all other keys may appear once.

Example::

    string.length = 0.5 m
    string.radius = 1 mm
    string.stiffness = rigid
    winch.radius = 5 mm
    load.axial = 20 N
    dt = 5 ms
    phase = rates 6 s : phi_dot 2.26 rad/s
    phase = hold 0.5 s
    phase = rates 30 s : theta_dot 5 rad/s
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .control import AllocationPolicy
from .core import LoadCondition, StringParams, WinchGeometry
from .errors import ParameterError, ParseError
from .gears import GearTrain
from .simulate import Phase, Scenario

_LENGTH = {"m": 1.0, "mm": 1e-3, "cm": 1e-2}
_ANGLE = {"rad": 1.0, "deg": math.pi / 180.0}
_TIME = {"s": 1.0, "ms": 1e-3}
_FORCE = {"N": 1.0, "kN": 1e3}
_TORQUE = {"N.m": 1.0, "Nm": 1.0, "mN.m": 1e-3}
_STIFFNESS = {"N/m": 1.0, "kN/m": 1e3, "N/mm": 1e3}
_LIN_VEL = {"m/s": 1.0, "mm/s": 1e-3}
_ANG_VEL = {"rad/s": 1.0, "deg/s": math.pi / 180.0}

_UNIT_TABLES = {
    "length": _LENGTH, "angle": _ANGLE, "time": _TIME, "force": _FORCE,
    "torque": _TORQUE, "stiffness": _STIFFNESS, "linear velocity": _LIN_VEL,
    "angular velocity": _ANG_VEL,
}

# Paper-plausible sweep defaults for each driven channel [rad/s].
SWEEP_DEFAULTS = {"twist": (0.40, 4.02, 10), "winch": (0.20, 2.01, 10)}


@dataclass(frozen=True)
class RangeSpec:
    """Inclusive linear range, written `start .. stop : points`."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ParameterError(f"range needs at least 2 points, got {self.points}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ParameterError("range bounds must be finite")
        if self.stop <= self.start:
            raise ParameterError(
                f"range stop must exceed start, got {self.start} .. {self.stop}")

    def values(self) -> list[float]:
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + i * step for i in range(self.points - 1)] + [self.stop]


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description with defaults applied (SI units)."""

    string_length: float
    winch_radius: float
    string_radius: float = 0.001
    string_stiffness: float | None = 60_000.0
    bushing_distance: float = 0.050
    friction_coeff: float = 0.2
    bevel_count: int = 2
    bevel_ratio: float = 2.0
    turret_count: int = 2
    turret_ratio: float = 2.0
    axial_force: float = 0.0
    twist_moment: float = 0.0
    policy_mode: str = "winch_then_twist"
    policy_switch: float = 0.050
    policy_fraction: float = 0.5
    dt: float = 0.001
    theta_min: float = 1.0
    theta_dot_max: float | None = None
    initial_twist: float = 0.0
    initial_winch: float = 0.0
    phases: tuple[Phase, ...] = ()
    sweep_kind: str = "twist"
    sweep_rates: RangeSpec | None = None
    sweep_duration: float = 0.5
    force_twist: RangeSpec = field(default_factory=lambda: RangeSpec(0.0, 300.0, 31))
    force_torque: RangeSpec = field(default_factory=lambda: RangeSpec(0.0, 0.16, 9))
    force_held_length: float | None = None
    ratio_twist: RangeSpec = field(default_factory=lambda: RangeSpec(0.0, 200.0, 21))
    ratio_winch: RangeSpec = field(default_factory=lambda: RangeSpec(0.0, 15.0, 4))
    output_format: str = "csv"
    output_stem: str | None = None

    def string_params(self) -> StringParams:
        return StringParams(unloaded_length=self.string_length,
                            radius=self.string_radius,
                            stiffness=self.string_stiffness)

    def winch_geometry(self) -> WinchGeometry:
        return WinchGeometry(winch_radius=self.winch_radius,
                             bushing_distance=self.bushing_distance,
                             friction_coeff=self.friction_coeff)

    def gear_train(self) -> GearTrain:
        return GearTrain(bevel_count=self.bevel_count, bevel_ratio=self.bevel_ratio,
                         turret_count=self.turret_count, turret_ratio=self.turret_ratio)

    def load(self) -> LoadCondition:
        return LoadCondition(axial_force=self.axial_force,
                             twist_moment=self.twist_moment)

    def policy(self) -> AllocationPolicy:
        if self.policy_mode == "winch_then_twist":
            return AllocationPolicy.winch_then_twist(self.policy_switch)
        if self.policy_mode == "proportional":
            return AllocationPolicy.proportional(self.policy_fraction)
        return AllocationPolicy(self.policy_mode)

    def scenario(self) -> Scenario:
        if not self.phases:
            raise ParameterError("config has no phases; add at least one "
                                 "`phase =` line to simulate")
        return Scenario(params=self.string_params(), winch=self.winch_geometry(),
                        train=self.gear_train(), load=self.load(),
                        policy=self.policy(), phases=self.phases, dt=self.dt,
                        theta_min=self.theta_min, theta_dot_max=self.theta_dot_max,
                        initial_twist=self.initial_twist,
                        initial_winch=self.initial_winch)

    def sweep_base(self) -> Scenario:
        placeholder = Phase.hold(self.sweep_duration)
        return Scenario(params=self.string_params(), winch=self.winch_geometry(),
                        train=self.gear_train(), load=self.load(),
                        policy=self.policy(), phases=(placeholder,), dt=self.dt,
                        theta_min=self.theta_min, theta_dot_max=self.theta_dot_max,
                        initial_twist=self.initial_twist,
                        initial_winch=self.initial_winch)

    def sweep_rate_values(self) -> list[float]:
        spec = self.sweep_rates
        if spec is None:
            spec = RangeSpec(*SWEEP_DEFAULTS[self.sweep_kind])
        return spec.values()


def _parse_float(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{where}: expected a number, got {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"{where}: value must be finite, got {token!r}")
    return value


def _parse_int(token: str, where: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{where}: expected an integer, got {token!r}") from None


def _parse_quantity(text: str, kind: str, where: str) -> float:
    """Parse '<number> <unit>' and convert to SI."""
    table = _UNIT_TABLES[kind]
    parts = text.split()
    if len(parts) == 1:
        raise ParseError(f"{where}: missing unit suffix on {kind} value "
                         f"{text!r} (expected one of {', '.join(table)})")
    if len(parts) != 2:
        raise ParseError(f"{where}: expected '<number> <unit>', got {text!r}")
    value = _parse_float(parts[0], where)
    if parts[1] not in table:
        raise ParseError(f"{where}: unknown {kind} unit {parts[1]!r} "
                         f"(expected one of {', '.join(table)})")
    return value * table[parts[1]]


def _parse_range(text: str, kind: str, where: str) -> RangeSpec:
    head, sep, count = text.rpartition(":")
    if not sep:
        raise ParseError(f"{where}: range must end with ': <points>', got {text!r}")
    bounds = head.split("..")
    if len(bounds) != 2:
        raise ParseError(f"{where}: range bounds must be '<start> .. <stop>', "
                         f"got {head.strip()!r}")
    return RangeSpec(
        start=_parse_quantity(bounds[0].strip(), kind, where),
        stop=_parse_quantity(bounds[1].strip(), kind, where),
        points=_parse_int(count.strip(), where),
    )


def _parse_policy(text: str, where: str) -> dict:
    parts = text.split(None, 1)
    mode = parts[0]
    arg = parts[1].strip() if len(parts) > 1 else None
    if mode in ("winch_only", "twist_only"):
        if arg is not None:
            raise ParseError(f"{where}: policy {mode} takes no argument")
        return {"policy_mode": mode}
    if mode == "winch_then_twist":
        if arg is None:
            raise ParseError(f"{where}: winch_then_twist needs a switch "
                             f"contraction, e.g. 'winch_then_twist 50 mm'")
        return {"policy_mode": mode,
                "policy_switch": _parse_quantity(arg, "length", where)}
    if mode == "proportional":
        if arg is None:
            raise ParseError(f"{where}: proportional needs a twist fraction, "
                             f"e.g. 'proportional 0.4'")
        return {"policy_mode": mode, "policy_fraction": _parse_float(arg, where)}
    raise ParseError(f"{where}: unknown policy {mode!r}")


def _parse_phase(text: str, where: str) -> Phase:
    head, sep, detail = text.partition(":")
    head_parts = head.split()
    if not head_parts:
        raise ParseError(f"{where}: empty phase")
    kind = head_parts[0]
    duration_text = " ".join(head_parts[1:])
    if not duration_text:
        raise ParseError(f"{where}: phase needs a duration, e.g. 'hold 1 s'")
    duration = _parse_quantity(duration_text, "time", where)

    if kind == "hold":
        if sep:
            raise ParseError(f"{where}: hold phase takes no targets")
        return Phase.hold(duration)
    if kind == "rates":
        if not sep or not detail.strip():
            raise ParseError(f"{where}: rates phase needs targets, e.g. "
                             f"'rates 6 s : phi_dot 2.26 rad/s'")
        theta_dot = phi_dot = 0.0
        seen = set()
        for item in detail.split(","):
            item_parts = item.split(None, 1)
            if len(item_parts) != 2 or item_parts[0] not in ("theta_dot", "phi_dot"):
                raise ParseError(f"{where}: rate target must be 'theta_dot "
                                 f"<rate>' or 'phi_dot <rate>', got {item.strip()!r}")
            name, rate_text = item_parts
            if name in seen:
                raise ParseError(f"{where}: duplicate rate target {name!r}")
            seen.add(name)
            rate = _parse_quantity(rate_text.strip(), "angular velocity", where)
            if name == "theta_dot":
                theta_dot = rate
            else:
                phi_dot = rate
        return Phase.rates(duration, theta_dot=theta_dot, phi_dot=phi_dot)
    if kind == "velocity":
        if not sep or not detail.strip():
            raise ParseError(f"{where}: velocity phase needs a target, e.g. "
                             f"'velocity 5 s : 5 mm/s'")
        return Phase.velocity(duration, _parse_quantity(detail.strip(),
                                                        "linear velocity", where))
    raise ParseError(f"{where}: unknown phase kind {kind!r} "
                     f"(expected hold, rates, or velocity)")


# key -> (RunConfig field, value kind); kinds handled in _convert_value
_SCALAR_KEYS = {
    "string.length": ("string_length", "length"),
    "string.radius": ("string_radius", "length"),
    "string.stiffness": ("string_stiffness", "stiffness_or_rigid"),
    "winch.radius": ("winch_radius", "length"),
    "winch.bushing_distance": ("bushing_distance", "length"),
    "winch.friction": ("friction_coeff", "bare_float"),
    "gears.bevel_count": ("bevel_count", "bare_int"),
    "gears.bevel_ratio": ("bevel_ratio", "bare_float"),
    "gears.turret_count": ("turret_count", "bare_int"),
    "gears.turret_ratio": ("turret_ratio", "bare_float"),
    "load.axial": ("axial_force", "force"),
    "load.twist_moment": ("twist_moment", "torque"),
    "dt": ("dt", "time"),
    "control.theta_min": ("theta_min", "angle"),
    "control.theta_dot_max": ("theta_dot_max", "angular velocity"),
    "initial.twist": ("initial_twist", "angle"),
    "initial.winch": ("initial_winch", "angle"),
    "sweep.kind": ("sweep_kind", "sweep_kind"),
    "sweep.rates": ("sweep_rates", "range:angular velocity"),
    "sweep.duration": ("sweep_duration", "time"),
    "force.twist": ("force_twist", "range:angle"),
    "force.torque": ("force_torque", "range:torque"),
    "force.held_length": ("force_held_length", "length"),
    "ratio.twist": ("ratio_twist", "range:angle"),
    "ratio.winch": ("ratio_winch", "range:angle"),
    "output.format": ("output_format", "output_format"),
    "output.stem": ("output_stem", "string"),
}


def _convert_value(kind: str, text: str, where: str):
    if kind in _UNIT_TABLES:
        return _parse_quantity(text, kind, where)
    if kind.startswith("range:"):
        return _parse_range(text, kind.split(":", 1)[1], where)
    if kind == "bare_float":
        return _parse_float(text, where)
    if kind == "bare_int":
        return _parse_int(text, where)
    if kind == "stiffness_or_rigid":
        return None if text == "rigid" else _parse_quantity(text, "stiffness", where)
    if kind == "sweep_kind":
        if text not in ("twist", "winch"):
            raise ParseError(f"{where}: sweep.kind must be 'twist' or 'winch', "
                             f"got {text!r}")
        return text
    if kind == "output_format":
        if text != "csv":
            raise ParseError(f"{where}: unsupported output format {text!r} "
                             f"(only 'csv')")
        return text
    if kind == "string":
        return text
    raise AssertionError(kind)


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text into a RunConfig.

    Raises ParseError (with line context) on malformed text or unknown
    keys, and ParameterError naming the violated invariant on values that
    parse but fail validation.
    """
    values: dict = {}
    phases: list[Phase] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        key, sep, value_text = line.partition("=")
        if not sep:
            raise ParseError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        value_text = value_text.strip()
        if not value_text:
            raise ParseError(f"{where}: empty value for key {key!r}")

        if key == "phase":
            phases.append(_parse_phase(value_text, where))
        elif key == "policy":
            if "policy_mode" in values:
                raise ParseError(f"{where}: duplicate key 'policy'")
            values.update(_parse_policy(value_text, where))
        elif key in _SCALAR_KEYS:
            target, kind = _SCALAR_KEYS[key]
            if target in values:
                raise ParseError(f"{where}: duplicate key {key!r}")
            values[target] = _convert_value(kind, value_text, f"{where} ({key})")
        else:
            raise ParseError(f"{where}: unknown key {key!r}")

    for required in ("string_length", "winch_radius"):
        if required not in values:
            pretty = {"string_length": "string.length",
                      "winch_radius": "winch.radius"}[required]
            raise ParameterError(f"missing required key {pretty!r}")

    cfg = RunConfig(phases=tuple(phases), **values)
    # Construct every domain object now so invariant violations surface at
    # parse time, not mid-run.
    cfg.string_params()
    cfg.winch_geometry()
    cfg.gear_train()
    cfg.load()
    cfg.policy()
    if not (math.isfinite(cfg.dt) and cfg.dt > 0):
        raise ParameterError(f"dt must be > 0, got {cfg.dt}")
    if cfg.theta_min <= 0:
        raise ParameterError(f"control.theta_min must be > 0, got {cfg.theta_min}")
    if cfg.theta_dot_max is not None and cfg.theta_dot_max <= 0:
        raise ParameterError(f"control.theta_dot_max must be > 0, got {cfg.theta_dot_max}")
    if cfg.sweep_duration <= 0:
        raise ParameterError(f"sweep.duration must be > 0, got {cfg.sweep_duration}")
    if cfg.force_held_length is not None and cfg.force_held_length <= 0:
        raise ParameterError(f"force.held_length must be > 0, got {cfg.force_held_length}")
    if cfg.initial_twist < 0:
        raise ParameterError(f"initial.twist must be >= 0, got {cfg.initial_twist}")
    return cfg


def _fmt(value: float) -> str:
    return repr(float(value))


def _serialize_phase(phase: Phase) -> str:
    if phase.kind == "hold":
        return f"hold {_fmt(phase.duration)} s"
    if phase.kind == "rates":
        return (f"rates {_fmt(phase.duration)} s : "
                f"theta_dot {_fmt(phase.theta_dot)} rad/s, "
                f"phi_dot {_fmt(phase.phi_dot)} rad/s")
    return f"velocity {_fmt(phase.duration)} s : {_fmt(phase.x_dot)} m/s"


def _serialize_range(spec: RangeSpec, unit: str) -> str:
    return f"{_fmt(spec.start)} {unit} .. {_fmt(spec.stop)} {unit} : {spec.points}"


def serialize_config(cfg: RunConfig) -> str:
    """Canonical SI-unit text that parses back to an equal RunConfig."""
    lines = [
        f"string.length = {_fmt(cfg.string_length)} m",
        f"string.radius = {_fmt(cfg.string_radius)} m",
        ("string.stiffness = rigid" if cfg.string_stiffness is None
         else f"string.stiffness = {_fmt(cfg.string_stiffness)} N/m"),
        f"winch.radius = {_fmt(cfg.winch_radius)} m",
        f"winch.bushing_distance = {_fmt(cfg.bushing_distance)} m",
        f"winch.friction = {_fmt(cfg.friction_coeff)}",
        f"gears.bevel_count = {cfg.bevel_count}",
        f"gears.bevel_ratio = {_fmt(cfg.bevel_ratio)}",
        f"gears.turret_count = {cfg.turret_count}",
        f"gears.turret_ratio = {_fmt(cfg.turret_ratio)}",
        f"load.axial = {_fmt(cfg.axial_force)} N",
        f"load.twist_moment = {_fmt(cfg.twist_moment)} N.m",
    ]
    if cfg.policy_mode == "winch_then_twist":
        lines.append(f"policy = winch_then_twist {_fmt(cfg.policy_switch)} m")
    elif cfg.policy_mode == "proportional":
        lines.append(f"policy = proportional {_fmt(cfg.policy_fraction)}")
    else:
        lines.append(f"policy = {cfg.policy_mode}")
    lines += [
        f"dt = {_fmt(cfg.dt)} s",
        f"control.theta_min = {_fmt(cfg.theta_min)} rad",
        f"initial.twist = {_fmt(cfg.initial_twist)} rad",
        f"initial.winch = {_fmt(cfg.initial_winch)} rad",
        f"sweep.kind = {cfg.sweep_kind}",
        f"sweep.duration = {_fmt(cfg.sweep_duration)} s",
        f"force.twist = {_serialize_range(cfg.force_twist, 'rad')}",
        f"force.torque = {_serialize_range(cfg.force_torque, 'N.m')}",
        f"ratio.twist = {_serialize_range(cfg.ratio_twist, 'rad')}",
        f"ratio.winch = {_serialize_range(cfg.ratio_winch, 'rad')}",
        f"output.format = {cfg.output_format}",
    ]
    if cfg.theta_dot_max is not None:
        lines.append(f"control.theta_dot_max = {_fmt(cfg.theta_dot_max)} rad/s")
    if cfg.sweep_rates is not None:
        lines.append(f"sweep.rates = {_serialize_range(cfg.sweep_rates, 'rad/s')}")
    if cfg.force_held_length is not None:
        lines.append(f"force.held_length = {_fmt(cfg.force_held_length)} m")
    if cfg.output_stem is not None:
        lines.append(f"output.stem = {cfg.output_stem}")
    lines += [f"phase = {_serialize_phase(p)}" for p in cfg.phases]
    return "\n".join(lines) + "\n"
