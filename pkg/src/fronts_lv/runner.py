"""Single runs from a RunConfig, and the concurrent parameter sweep."""
from __future__ import annotations

import configparser
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .analysis import classify_outcome, measure_speeds
from .config import RunConfig, dump_config, load_config
from .errors import ConfigError, FrontsError, InsufficientData
from .fbm_solver import simulate
from .storage import fmt, write_json, write_snapshots, write_timeseries
from .svgplot import fronts_plot, phase_plot

THREADS_ENV = "FRONTS_LV_THREADS"


def run(cfg: RunConfig):
    """Simulate and post-process; returns (trajectory, outcome, speed report or None, report dict)."""
    u0, v0 = cfg.profiles()
    traj = simulate(cfg.model, u0, v0, cfg.solver, cfg.detect)
    outcome = classify_outcome(traj, cfg.model, cfg.detect)
    try:
        speeds = measure_speeds(traj, cfg.model)
        speed_dict = speeds.to_dict()
    except InsufficientData as exc:
        speeds, speed_dict = None, {"error": str(exc)}
    report = {
        "outcome": outcome.to_dict(),
        "speeds": speed_dict,
        "monitor": traj.diagnostics["monitor"],
        "diagnostics": {"steps": traj.diagnostics["steps"], "clamp_mass": traj.diagnostics["clamp_mass"],
                        "t_end": float(traj.records["t"][-1]), "records": len(traj)},
    }
    return traj, outcome, speeds, report


def write_run(directory, cfg: RunConfig, traj, speeds, report) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "config.ini").write_text(dump_config(cfg))
    write_timeseries(directory / "timeseries.csv", traj.records)
    if traj.snapshots:
        write_snapshots(directory / "snapshots", traj.snapshots)
    write_json(directory / "outcome.json", report)
    if cfg.output.plot or "svg" in cfg.output.formats:
        table = speeds.table if speeds is not None else None
        svg = fronts_plot(traj.records["t"], traj.records["g"], traj.records["h"],
                          table.kbar_beta if table else None, table.kund_mu if table else None)
        (directory / "fronts.svg").write_text(svg)


# ------------------------------------------------------------------ sweep

@dataclass(frozen=True)
class SweepSpec:
    """base: RunConfig; axes: ((dotted key, values), ...) expanded as a Cartesian product."""

    base: RunConfig
    axes: tuple
    max_runs: int = 400
    workers: int = 1

    def __post_init__(self):
        if not self.axes:
            raise ConfigError("axes: at least one axis is required")
        for key, values in self.axes:
            if not values:
                raise ConfigError(f"axes.{key}: empty value list")
        if self.size > self.max_runs:
            raise ConfigError(f"sweep.max_runs: grid has {self.size} points, cap is {self.max_runs}")

    @property
    def size(self) -> int:
        n = 1
        for _, values in self.axes:
            n *= len(values)
        return n

    def points(self):
        """(grid index, multi-index, {key: value}) in row-major order."""
        names = [key for key, _ in self.axes]
        ranges = [range(len(values)) for _, values in self.axes]
        for flat, multi in enumerate(itertools.product(*ranges)):
            yield flat, multi, {names[k]: self.axes[k][1][i] for k, i in enumerate(multi)}


def load_sweep(path) -> SweepSpec:
    """[sweep] base = run.ini, max_runs, workers; [axes] model.beta = 1, 10, ..."""
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(path.read_text())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    unknown = sorted(set(parser.sections()) - {"sweep", "axes"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown section")
    if not parser.has_section("sweep") or "base" not in parser["sweep"]:
        raise ConfigError("sweep.base: required key missing")
    extra = sorted(set(parser["sweep"]) - {"base", "max_runs", "workers"})
    if extra:
        raise ConfigError(f"sweep.{extra[0]}: unknown key")
    base = load_config(path.parent / parser["sweep"]["base"])
    axes = []
    if parser.has_section("axes"):
        for key, raw in parser.items("axes"):
            if key.partition(".")[0] not in ("model", "initial", "solver", "detect"):
                raise ConfigError(f"axes.{key}: axis must name a model, initial, solver or detect key")
            try:
                values = tuple(float(v) for v in raw.split(",") if v.strip())
            except ValueError:
                raise ConfigError(f"axes.{key}: values must be numbers") from None
            axes.append((key, values))
    try:
        max_runs = int(parser["sweep"].get("max_runs", "400"))
        workers = int(parser["sweep"].get("workers", "1"))
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from None
    return SweepSpec(base, tuple(axes), max_runs, max(1, workers))


def worker_count(spec: SweepSpec) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}: expected an integer, got {env!r}") from None
    return spec.workers


def _sweep_task(base: RunConfig, values: dict):
    """Runs one grid point; never raises (failures become row data)."""
    try:
        cfg = base
        for key, value in values.items():
            cfg = cfg.with_value(key, value)
        _, outcome, speeds, _ = run(cfg)
        return {"status": "ok", "prey": outcome.prey.value, "predator": outcome.predator.value,
                "g_end": outcome.evidence["g_end"], "h_end": outcome.evidence["h_end"],
                "g_slope": speeds.g_slope if speeds else None, "h_slope": speeds.h_slope if speeds else None,
                "error": ""}
    except (FrontsError, ValueError) as exc:
        return {"status": "failed", "prey": "", "predator": "", "g_end": None, "h_end": None,
                "g_slope": None, "h_slope": None, "error": f"{type(exc).__name__}: {exc}"}


SWEEP_COLUMNS = ("status", "prey", "predator", "g_end", "h_end", "g_slope", "h_slope", "error")


def run_sweep(spec: SweepSpec, workers: int | None = None):
    """Rows ordered by grid index, whatever the completion order."""
    workers = workers or worker_count(spec)
    points = list(spec.points())
    if workers == 1:
        results = [_sweep_task(spec.base, values) for _, _, values in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_task, spec.base, values) for _, _, values in points]
            results = [f.result() for f in futures]
    rows = []
    for (flat, multi, values), result in zip(points, results):
        rows.append({"index": flat, "multi": multi, "values": values, **result})
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt(value)
    return str(value).replace(",", ";").replace("\n", " ")


def sweep_csv(spec: SweepSpec, rows) -> str:
    names = [key for key, _ in spec.axes]
    lines = [",".join(["index", *names, *SWEEP_COLUMNS])]
    for row in rows:
        cells = [str(row["index"])] + [_cell(row["values"][n]) for n in names]
        cells += [_cell(row[c]) for c in SWEEP_COLUMNS]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_phase_svg(spec: SweepSpec, rows) -> str | None:
    """Outcome heat map over the first two axes (None for one-axis sweeps)."""
    if len(spec.axes) != 2:
        return None
    (xname, xvals), (yname, yvals) = spec.axes
    labels = {}
    for row in rows:
        if row["status"] == "ok":
            labels[tuple(row["multi"])] = f"{row['prey']}/{row['predator']}"
    return phase_plot(list(xvals), list(yvals), labels, xname, yname, "sweep outcomes")


def write_sweep(directory, spec: SweepSpec, rows) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "sweep.csv").write_text(sweep_csv(spec, rows))
    svg = sweep_phase_svg(spec, rows)
    if svg is not None:
        (directory / "phase.svg").write_text(svg)

