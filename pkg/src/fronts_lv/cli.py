"""Command-line interface: ``fronts-lv <subcommand> ...`` (or ``python3 -m fronts_lv``).

Exit codes: 0 ok, 1 other package error, 2 configuration, 3 solver failure,
4 invariant breach, 5 inconclusive threshold.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import classify_outcome, measure_speeds
from .config import ProfileSpec, build_profile, load_config
from .errors import ConfigError, FrontsError, InconclusiveThreshold, InvariantBreach, SolverError
from .semiwave import solve_semiwave
from .storage import dumps, read_columns, read_timeseries, trajectory_from_dir, write_rows
from .svgplot import fronts_plot, phase_plot, profile_plot
from .thresholds import check_criteria, critical_gamma

EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_SOLVER, EXIT_INVARIANT, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4, 5


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def _output_dir(cfg, override):
    if override:
        return Path(override)
    directory = Path(cfg.output.directory)
    return directory if directory.is_absolute() else Path(cfg.base_dir) / directory


def cmd_simulate(args):
    from .runner import run, write_run

    cfg = load_config(args.config)
    if args.t_max is not None:
        cfg = replace(cfg, solver=replace(cfg.solver, t_max=args.t_max))
    traj, outcome, speeds, report = run(cfg)
    directory = _output_dir(cfg, args.out)
    write_run(directory, cfg, traj, speeds, report)
    _emit({"directory": str(directory), "outcome": outcome.to_dict(),
           "t_end": report["diagnostics"]["t_end"], "steps": report["diagnostics"]["steps"]})
    return EXIT_OK


def cmd_semiwave(args):
    wave = solve_semiwave(args.nu, args.d, args.theta, args.tol)
    if args.profile:
        write_rows(args.profile, "y,q", (wave.y, wave.q))
    _emit({"nu": args.nu, "d": args.d, "theta": args.theta, "k": wave.k, "slope_at_zero": wave.slope_at_zero,
           "speed_limit": 2.0 * (args.theta * args.d) ** 0.5})
    return EXIT_OK


def cmd_gamma_star(args):
    z0 = build_profile(ProfileSpec(args.kind, args.amplitude, args.table), args.rho0, ".", "profile")
    thr = critical_gamma(args.d, args.theta, args.rho0, z0, args.tol)
    out = thr.to_dict()
    out["result"] = "spreads for all gamma" if thr.spreads_for_all else "finite threshold"
    _emit(out)
    return EXIT_OK


def cmd_check(args):
    cfg = load_config(args.config)
    u0, v0 = cfg.profiles()
    report = check_criteria(cfg.model, u0, v0, args.tol)
    for entry in report.entries:
        print(entry["summary"], file=sys.stderr)
    _emit(report.to_dict())
    return EXIT_OK


def _run_dir(path):
    directory = Path(path)
    cfg = load_config(directory / "config.ini")
    return cfg, trajectory_from_dir(directory, cfg.model)


def cmd_classify(args):
    cfg, traj = _run_dir(args.run_dir)
    _emit(classify_outcome(traj, cfg.model, cfg.detect).to_dict())
    return EXIT_OK


def cmd_speeds(args):
    cfg, traj = _run_dir(args.run_dir)
    report = measure_speeds(traj, cfg.model).to_dict()
    report["verdict"] = {
        "g": "in" if report["g_in_sandwich"] else "out" if report["g_in_sandwich"] is False else "n/a",
        "h": "in" if report["h_in_sandwich"] else "out" if report["h_in_sandwich"] is False else "n/a",
    }
    _emit(report)
    return EXIT_OK


def cmd_sweep(args):
    from .runner import load_sweep, run_sweep, sweep_csv, write_sweep

    spec = load_sweep(args.spec)
    rows = run_sweep(spec, args.workers)
    directory = Path(args.out) if args.out else Path(args.spec).parent / "sweep_out"
    write_sweep(directory, spec, rows)
    sys.stdout.write(sweep_csv(spec, rows))
    return EXIT_OK


def _svg_for(kind, source):
    source = Path(source)
    if kind == "fronts":
        csv_path = source / "timeseries.csv" if source.is_dir() else source
        rec = read_timeseries(csv_path)
        kbar = kund = None
        cfg_path = csv_path.parent / "config.ini"
        if cfg_path.exists():
            from .semiwave import speed_table
            table = speed_table(load_config(cfg_path).model)
            kbar, kund = table.kbar_beta, table.kund_mu
        return fronts_plot(rec["t"], rec["g"], rec["h"], kbar, kund)
    if kind == "profile":
        cols = read_columns(source, "x,u,v")
        return profile_plot(cols["x"], cols["u"], cols["v"])
    # phase: a sweep.csv with exactly two axis columns
    lines = source.read_text().splitlines()
    if len(lines) < 2:
        raise ValueError(f"{source}: no sweep rows")
    header = lines[0].split(",")
    axis_names = header[1:header.index("status")]
    if len(axis_names) != 2:
        raise ValueError("phase plot needs a two-axis sweep")
    rows = [line.split(",") for line in lines[1:]]
    xvals = sorted({float(r[1]) for r in rows})
    yvals = sorted({float(r[2]) for r in rows})
    col = {name: i for i, name in enumerate(header)}
    labels = {}
    for r in rows:
        if r[col["status"]] == "ok":
            labels[(xvals.index(float(r[1])), yvals.index(float(r[2])))] = f"{r[col['prey']]}/{r[col['predator']]}"
    return phase_plot(xvals, yvals, labels, axis_names[0], axis_names[1], "sweep outcomes")


def cmd_plot(args):
    try:
        svg = _svg_for(args.kind, args.input)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot plot {args.input}: {exc}", file=sys.stderr)
        return EXIT_OTHER
    Path(args.out).write_text(svg)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fronts-lv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the coupled system from a config file")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: [output] directory, relative to the config)")
    p.add_argument("--t-max", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("semiwave", help="semi-wave speed k(nu, d, theta)")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--profile", help="write the (y, q) profile to this CSV")
    p.set_defaults(func=cmd_semiwave)

    p = sub.add_parser("gamma-star", help="critical moving parameter of the single-species problem")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--rho0", type=float, required=True)
    p.add_argument("--kind", default="cosine", choices=("cosine", "bump", "tabulated"))
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--table", default=None)
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(func=cmd_gamma_star)

    p = sub.add_parser("check", help="evaluate the sufficient spreading/vanishing criteria")
    p.add_argument("config")
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(func=cmd_check)

    for name, func, text in (("classify", cmd_classify, "outcome labels of a finished run"),
                             ("speeds", cmd_speeds, "front-speed sandwich check of a finished run")):
        p = sub.add_parser(name, help=text)
        p.add_argument("run_dir")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="run a parameter grid")
    p.add_argument("spec")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="SVG plot of a run, snapshot or sweep")
    p.add_argument("kind", choices=("fronts", "profile", "phase"))
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InconclusiveThreshold as exc:
        print(f"inconclusive threshold: {exc} (bracket {exc.bracket})", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except FrontsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if args.command in ("gamma-star", "semiwave") else EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
