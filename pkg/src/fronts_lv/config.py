"""Run configuration: an INI file with sections [model] [initial] [solver] [detect] [output].

Every key is optional except the eight model parameters; unknown sections or
keys are errors, so a misspelt parameter never silently falls back to a default.

    [model]
    a = 2.0
    b = 0.5
    ...
    [initial]
    u0_kind = cosine        # cosine | bump | tabulated
    u0_amplitude = 1.0
    u0_table = u0.csv       # tabulated only: two columns x,value; path relative to the config
"""
from __future__ import annotations

import configparser
import csv
import io
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .model import InitialProfile, ModelParams
from .scheme import DT_POLICIES, DetectConfig, SolverConfig

MODEL_KEYS = ("a", "b", "c", "d", "beta", "mu", "g0", "h0")
PROFILE_KINDS = ("cosine", "bump", "tabulated")


@dataclass(frozen=True)
class ProfileSpec:
    kind: str = "cosine"
    amplitude: float = 1.0
    table: Optional[str] = None


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    formats: tuple = ("csv", "json")
    plot: bool = False


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    u0: ProfileSpec = ProfileSpec()
    v0: ProfileSpec = ProfileSpec()
    solver: SolverConfig = SolverConfig()
    detect: DetectConfig = DetectConfig()
    output: OutputConfig = OutputConfig()
    base_dir: str = field(default=".", compare=False)

    def profiles(self):
        return (build_profile(self.u0, self.model.g0, self.base_dir, "initial.u0"),
                build_profile(self.v0, self.model.h0, self.base_dir, "initial.v0"))

    def with_value(self, path: str, value) -> "RunConfig":
        """Copy with one dotted key (e.g. "model.beta") replaced; validated like a parsed file."""
        text = dump_config(self)
        parser = _parser()
        parser.read_string(text)
        section, _, key = path.partition(".")
        if not parser.has_section(section):
            raise ConfigError(f"{path}: unknown section")
        parser.set(section, key, _format(value))
        return _from_parser(parser, self.base_dir)


def build_profile(spec: ProfileSpec, support: float, base_dir=".", where="initial") -> InitialProfile:
    try:
        if spec.kind == "cosine":
            return InitialProfile.cosine(support, spec.amplitude)
        if spec.kind == "bump":
            return InitialProfile.bump(support, spec.amplitude)
        xs, values = _read_table(Path(base_dir) / spec.table)
        profile = InitialProfile.tabulated(xs, values)
        return profile.with_support(support) if abs(profile.support - support) > 1e-12 * support else profile
    except (OSError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _read_table(path: Path):
    xs, values = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                x, value = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not xs:
                    continue  # header line
                raise ValueError(f"{path}: bad row {row!r}")
            xs.append(x)
            values.append(value)
    return xs, values


# ----------------------------------------------------------------- parsing

def _parser():
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    return parser


def _float(section, key, raw, positive=True, allow_zero=False):
    where = f"{section}.{key}"
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {raw!r}")
    if positive and not (value > 0 or (allow_zero and value == 0)):
        raise ConfigError(f"{where}: must be {'non-negative' if allow_zero else 'positive'}, got {raw}")
    return value


def _int(section, key, raw, minimum=1):
    try:
        value = int(raw)
    except ValueError:
        try:
            as_float = float(raw)
        except ValueError:
            as_float = math.nan
        if not as_float.is_integer():
            raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from None
        value = int(as_float)
    if value < minimum:
        raise ConfigError(f"{section}.{key}: must be >= {minimum}, got {value}")
    return value


def _bool(section, key, raw):
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")


def _check_keys(parser, section, allowed):
    if not parser.has_section(section):
        return {}
    items = dict(parser.items(section))
    unknown = sorted(set(items) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}.{unknown[0]}: unknown key (allowed: {', '.join(allowed)})")
    return items


def _model(parser):
    if not parser.has_section("model"):
        raise ConfigError("model: section missing")
    items = _check_keys(parser, "model", MODEL_KEYS)
    values = {}
    for key in MODEL_KEYS:
        if key not in items:
            raise ConfigError(f"model.{key}: required key missing")
        values[key] = _float("model", key, items[key])
    if values["h0"] > values["g0"]:
        raise ConfigError(f"model.h0: must not exceed model.g0 ({values['h0']} > {values['g0']})")
    return ModelParams(**values)


def _profile(items, prefix):
    spec = ProfileSpec()
    kind = items.get(f"{prefix}_kind", spec.kind).strip()
    if kind not in PROFILE_KINDS:
        raise ConfigError(f"initial.{prefix}_kind: must be one of {PROFILE_KINDS}, got {kind!r}")
    amplitude = spec.amplitude
    if f"{prefix}_amplitude" in items:
        amplitude = _float("initial", f"{prefix}_amplitude", items[f"{prefix}_amplitude"])
    table = items.get(f"{prefix}_table")
    if kind == "tabulated" and not table:
        raise ConfigError(f"initial.{prefix}_table: required for a tabulated profile")
    if kind != "tabulated" and table:
        raise ConfigError(f"initial.{prefix}_table: only valid with {prefix}_kind = tabulated")
    return ProfileSpec(kind, amplitude, table)


def _solver(parser):
    names = [f.name for f in fields(SolverConfig)]
    items = _check_keys(parser, "solver", names)
    values = {}
    for key, raw in items.items():
        if key in ("ny", "nxi"):
            values[key] = _int("solver", key, raw, minimum=16)
        elif key in ("snapshot_nx", "max_steps"):
            values[key] = _int("solver", key, raw, minimum=2)
        elif key == "dt_policy":
            if raw.strip() not in DT_POLICIES:
                raise ConfigError(f"solver.dt_policy: must be one of {DT_POLICIES}, got {raw!r}")
            values[key] = raw.strip()
        elif key == "stop_on_decision":
            values[key] = _bool("solver", key, raw)
        else:
            values[key] = _float("solver", key, raw, allow_zero=(key == "snapshot_dt"))
    return SolverConfig(**values)


def _detect(parser):
    names = [f.name for f in fields(DetectConfig)]
    items = _check_keys(parser, "detect", names)
    return DetectConfig(**{key: _float("detect", key, raw) for key, raw in items.items()})


def _output(parser):
    items = _check_keys(parser, "output", ("directory", "formats", "plot"))
    out = OutputConfig()
    formats = out.formats
    if "formats" in items:
        formats = tuple(part.strip() for part in items["formats"].split(",") if part.strip())
        bad = [f for f in formats if f not in ("csv", "json", "svg")]
        if bad:
            raise ConfigError(f"output.formats: unknown format {bad[0]!r} (allowed: csv, json, svg)")
    plot = _bool("output", "plot", items["plot"]) if "plot" in items else out.plot
    return OutputConfig(items.get("directory", out.directory).strip(), formats, plot)


def _from_parser(parser, base_dir="."):
    unknown = sorted(set(parser.sections()) - {"model", "initial", "solver", "detect", "output"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown section")
    model = _model(parser)
    initial = _check_keys(parser, "initial", [f"{p}_{k}" for p in ("u0", "v0") for k in ("kind", "amplitude", "table")])
    return RunConfig(model=model, u0=_profile(initial, "u0"), v0=_profile(initial, "v0"),
                     solver=_solver(parser), detect=_detect(parser), output=_output(parser),
                     base_dir=str(base_dir))


def parse_config(text: str, base_dir=".") -> RunConfig:
    parser = _parser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax: {exc}") from exc
    try:
        return _from_parser(parser, base_dir)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, base_dir=path.parent)


# ------------------------------------------------------------- serializing

def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ", ".join(str(v) for v in value)
    return str(value)


def dump_config(cfg: RunConfig) -> str:
    parser = _parser()
    parser["model"] = {key: _format(getattr(cfg.model, key)) for key in MODEL_KEYS}
    initial = {}
    for prefix, spec in (("u0", cfg.u0), ("v0", cfg.v0)):
        initial[f"{prefix}_kind"] = spec.kind
        initial[f"{prefix}_amplitude"] = _format(spec.amplitude)
        if spec.table:
            initial[f"{prefix}_table"] = spec.table
    parser["initial"] = initial
    parser["solver"] = {f.name: _format(getattr(cfg.solver, f.name)) for f in fields(SolverConfig)}
    parser["detect"] = {f.name: _format(getattr(cfg.detect, f.name)) for f in fields(DetectConfig)}
    parser["output"] = {"directory": cfg.output.directory, "formats": _format(cfg.output.formats),
                        "plot": _format(cfg.output.plot)}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def with_output_dir(cfg: RunConfig, directory) -> RunConfig:
    return replace(cfg, output=replace(cfg.output, directory=str(directory)))
