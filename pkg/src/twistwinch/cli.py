"""Command-line interface.

Subcommands:
    simulate <config>   run the configured scenario, write the trace table
    sweep <config>      constant-rate velocity sweep on one channel
    force <config>      quasi-static force model over a twist x torque grid
    ratio <config>      transmission-ratio map over a twist x winch grid

Each subcommand writes `<stem>_<command>.csv` into --out (default the
current directory) and prints a short summary; --plot additionally renders
a PNG figure next to the table.

Exit codes:
    0   success
    2   usage error
    10  config parse error
    11  config/parameter validation error
    12  model domain error (overtwist, fully wound, rigid force request)
    13  solver convergence failure
    14  I/O failure
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, parse_config
from .errors import (ConvergenceError, DomainError, ParameterError, ParseError,
                     ScenarioAborted)
from .output import (emit_trace, force_csv, ratio_csv, sweep_summary,
                     sweep_table, trace_summary, write_table)
from .simulate import force_table, ratio_map, run, velocity_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 10
EXIT_VALIDATION = 11
EXIT_DOMAIN = 12
EXIT_CONVERGENCE = 13
EXIT_IO = 14


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistwinch",
        description="Model a hybrid twisted-string + winch actuator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("simulate", "run the configured scenario and write its trace"),
        ("sweep", "velocity sweep over commanded effective rates"),
        ("force", "force model over a twist x torque grid"),
        ("ratio", "transmission-ratio map over an angle grid"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to a config file")
        cmd.add_argument("--out", default=".", metavar="DIR",
                         help="output directory (default: current)")
        cmd.add_argument("--plot", action="store_true",
                         help="also render a PNG figure next to the table")
    return parser


def _load(args) -> tuple[RunConfig, Path, str]:
    config_path = Path(args.config)
    text = config_path.read_text()
    cfg = parse_config(text)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = cfg.output_stem or config_path.stem
    return cfg, outdir, stem


def _cmd_simulate(args) -> int:
    cfg, outdir, stem = _load(args)
    trace_path = outdir / f"{stem}_trace.csv"
    try:
        samples = run(cfg.scenario())
    except ScenarioAborted as aborted:
        if aborted.samples:
            emit_trace(aborted.samples, trace_path)
            print(f"partial trace written to {trace_path}", file=sys.stderr)
        raise aborted.cause
    emit_trace(samples, trace_path)
    print(trace_summary(samples, cfg.scenario()))
    print(f"trace written to {trace_path}")
    if args.plot:
        from . import plots
        fig_path = outdir / f"{stem}_trace.png"
        plots.save_trace_figure(samples, fig_path)
        print(f"figure written to {fig_path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg, outdir, stem = _load(args)
    points = velocity_sweep(cfg.sweep_base(), cfg.sweep_kind,
                            cfg.sweep_rate_values(), cfg.sweep_duration)
    path = outdir / f"{stem}_sweep.csv"
    write_table(path, sweep_table(points))
    print(sweep_summary(points, cfg.sweep_kind))
    print(f"sweep table written to {path}")
    if args.plot:
        from . import plots
        fig_path = outdir / f"{stem}_sweep.png"
        plots.save_sweep_figure(points, cfg.sweep_kind, fig_path)
        print(f"figure written to {fig_path}")
    return EXIT_OK


def _cmd_force(args) -> int:
    cfg, outdir, stem = _load(args)
    held = cfg.force_held_length or cfg.string_length
    rows = force_table(cfg.string_params(), cfg.winch_geometry(), held,
                       cfg.force_twist.values(), cfg.force_torque.values())
    path = outdir / f"{stem}_force.csv"
    write_table(path, force_csv(rows))
    peak = max(rows, key=lambda r: r.breakdown.f_total)
    print(f"force grid         : {len(rows)} points, peak total "
          f"{peak.breakdown.f_total:.6g} N at theta={peak.theta:g} rad, "
          f"tau={peak.tau_w:g} N.m")
    print(f"force table written to {path}")
    if args.plot:
        from . import plots
        fig_path = outdir / f"{stem}_force.png"
        plots.save_force_figure(rows, fig_path)
        print(f"figure written to {fig_path}")
    return EXIT_OK


def _cmd_ratio(args) -> int:
    cfg, outdir, stem = _load(args)
    rows = ratio_map(cfg.string_params(), cfg.winch_geometry(), cfg.load(),
                     cfg.ratio_twist.values(), cfg.ratio_winch.values())
    path = outdir / f"{stem}_ratio.csv"
    write_table(path, ratio_csv(rows))
    top = max(rows, key=lambda r: r.ratio_twist)
    print(f"ratio map          : {len(rows)} points, twist channel up to "
          f"{top.ratio_twist * 1e3:.6g} mm/rad, winch channel "
          f"{rows[0].ratio_winch * 1e3:.6g} mm/rad")
    print(f"ratio table written to {path}")
    if args.plot:
        from . import plots
        fig_path = outdir / f"{stem}_ratio.png"
        plots.save_ratio_figure(rows, fig_path)
        print(f"figure written to {fig_path}")
    return EXIT_OK


_HANDLERS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "force": _cmd_force,
    "ratio": _cmd_ratio,
}


def main(argv=None) -> int:
    """Run the CLI and return its exit code (no sys.exit; test friendly)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_call:  # argparse handles usage/help itself
        return int(exit_call.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ParseError as err:
        print(f"twistwinch: parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ParameterError as err:
        print(f"twistwinch: invalid configuration: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except DomainError as err:
        print(f"twistwinch: domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as err:
        print(f"twistwinch: solver failure: {err}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as err:
        name = err.filename or "?"
        print(f"twistwinch: I/O error on {name}: {err}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())
