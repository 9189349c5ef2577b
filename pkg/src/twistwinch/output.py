"""Tabular emission: comma-separated tables with fixed headers.

Numbers are printed with 9 significant digits, so identical inputs always
produce byte-identical files.  Lengths and linear velocities are reported
in millimetres at this boundary; angles stay in radians.
"""

from __future__ import annotations

import math

from .errors import ParameterError
from .simulate import ForceSample, RatioSample, Scenario, SweepPoint, TraceSample

TRACE_HEADER = ("t_s,theta_eff_rad,phi_eff_rad,theta1_rad,theta2_rad,"
                "dX_total_mm,x_dot_mm_s,f_total_N,tr_twist_mm_per_rad,"
                "tr_winch_mm_per_rad")
SWEEP_HEADER = "rate_rad_s,x_dot_mm_s"
FORCE_HEADER = ("theta_rad,tau_w_Nm,f_twist_N,f_winch_N,f_total_N,"
                "alpha_rad,gamma_rad")
RATIO_HEADER = "theta_eff_rad,phi_eff_rad,tr_twist_mm_per_rad,tr_winch_mm_per_rad"


def fmt(value: float) -> str:
    """9-significant-digit formatting shared by every table."""
    return f"{value:.9g}"


def _opt(value: float | None) -> str:
    return "" if value is None else fmt(value)


def trace_table(samples: list[TraceSample]) -> str:
    if not samples:
        raise ParameterError("cannot emit an empty trace")
    lines = [TRACE_HEADER]
    for s in samples:
        lines.append(",".join([
            fmt(s.t), fmt(s.theta_eff), fmt(s.phi_eff), fmt(s.theta1),
            fmt(s.theta2), fmt(s.total_contraction * 1e3), fmt(s.x_dot * 1e3),
            _opt(s.f_total), fmt(s.ratio_twist * 1e3), fmt(s.ratio_winch * 1e3),
        ]))
    return "\n".join(lines) + "\n"


def sweep_table(points: list[SweepPoint]) -> str:
    if not points:
        raise ParameterError("cannot emit an empty sweep")
    lines = [SWEEP_HEADER]
    lines += [f"{fmt(p.rate)},{fmt(p.x_dot * 1e3)}" for p in points]
    return "\n".join(lines) + "\n"


def force_csv(rows: list[ForceSample]) -> str:
    if not rows:
        raise ParameterError("cannot emit an empty force table")
    lines = [FORCE_HEADER]
    for r in rows:
        b = r.breakdown
        lines.append(",".join([
            fmt(r.theta), fmt(r.tau_w), fmt(b.f_twist), fmt(b.f_winch),
            fmt(b.f_total), fmt(b.helix_angle), fmt(b.exit_angle),
        ]))
    return "\n".join(lines) + "\n"


def ratio_csv(rows: list[RatioSample]) -> str:
    if not rows:
        raise ParameterError("cannot emit an empty ratio table")
    lines = [RATIO_HEADER]
    lines += [",".join([fmt(r.theta_eff), fmt(r.phi_eff),
                        fmt(r.ratio_twist * 1e3), fmt(r.ratio_winch * 1e3)])
              for r in rows]
    return "\n".join(lines) + "\n"


def write_table(path, text: str) -> None:
    """Write with pinned newlines so output bytes are platform independent."""
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def emit_trace(samples: list[TraceSample], path) -> None:
    write_table(path, trace_table(samples))


def trace_summary(samples: list[TraceSample], scenario: Scenario) -> str:
    """Few-line human summary of a completed run."""
    last = samples[-1]
    winch_part = scenario.winch.winch_radius * last.phi_eff
    twist_part = last.total_contraction - winch_part
    peak_rate = max(abs(s.x_dot) for s in samples)
    return "\n".join([
        f"samples            : {len(samples)} (t = 0 .. {fmt(last.t)} s)",
        f"final twist angle  : {fmt(last.theta_eff)} rad",
        f"final winch angle  : {fmt(last.phi_eff)} rad",
        f"total displacement : {fmt(last.total_contraction * 1e3)} mm",
        f"  from winching    : {fmt(winch_part * 1e3)} mm",
        f"  from twisting    : {fmt(twist_part * 1e3)} mm",
        f"peak string speed  : {fmt(peak_rate * 1e3)} mm/s",
    ])


def sweep_summary(points: list[SweepPoint], kind: str) -> str:
    lo, hi = points[0], points[-1]
    slope = ((hi.x_dot - lo.x_dot) / (hi.rate - lo.rate)
             if hi.rate != lo.rate else math.nan)
    return "\n".join([
        f"{kind} sweep        : {len(points)} rates, "
        f"{fmt(lo.rate)} .. {fmt(hi.rate)} rad/s",
        f"string velocity    : {fmt(lo.x_dot * 1e3)} .. {fmt(hi.x_dot * 1e3)} mm/s",
        f"mean gain          : {fmt(slope * 1e3)} mm/rad",
    ])
