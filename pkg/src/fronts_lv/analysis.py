"""Post-processing of coupled trajectories: outcome labels, front speeds, moving-frame errors."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import InsufficientData, RegimeError
from .logistic_fb import Classification, decide_species, fit_slope
from .model import ModelParams
from .scheme import DetectConfig
from .semiwave import SpeedTable, speed_table

SANDWICH_SLACK = 0.05


@dataclass
class Outcome:
    prey: Classification
    predator: Classification
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"prey": self.prey.value, "predator": self.predator.value, "evidence": self.evidence}


def prey_barrier(params: ModelParams) -> Optional[float]:
    """Sufficient spreading barrier for the prey, from the capacity a - b(1+ac); None if that is <= 0."""
    theta = params.prey_sub_capacity
    return 0.5 * math.pi * math.sqrt(params.d / theta) if theta > 0 else None


PREDATOR_BARRIER = 0.5 * math.pi


def _tail(t, window):
    return t >= t[-1] - window


def _prey_label(t, g, gdot, umax, params, detect):
    barrier = prey_barrier(params)
    verdict = decide_species(t, g, gdot, umax, barrier, detect)
    if verdict is not None or barrier is not None:
        return verdict, "barrier" if barrier is not None else "vanishing-window"
    # no certified barrier: front well past the predator-free barrier, still moving, density not collapsing
    if t[-1] - t[0] < detect.window:
        return None, "growth-heuristic"
    tail = _tail(t, detect.window)
    free_barrier = 0.5 * math.pi * math.sqrt(params.d / params.a)
    if (g[-1] > free_barrier * (1.0 + detect.spread_margin)
            and np.all(gdot[tail] > detect.growth_eps)
            and np.all(umax[tail] > detect.eps_vanish)
            and umax[-1] >= umax[tail][0]):
        return Classification.SPREADING, "growth-heuristic"
    return None, "growth-heuristic"


def _labels(rec, params: ModelParams, detect: DetectConfig):
    t = np.asarray(rec["t"], dtype=float)
    g, h = np.asarray(rec["g"], dtype=float), np.asarray(rec["h"], dtype=float)
    gdot, hdot = np.asarray(rec["gdot"], dtype=float), np.asarray(rec["hdot"], dtype=float)
    umax, vmax = np.asarray(rec["umax"], dtype=float), np.asarray(rec["vmax"], dtype=float)
    prey, prey_rule = _prey_label(t, g, gdot, umax, params, detect)
    pred = decide_species(t, h, hdot, vmax, PREDATOR_BARRIER, detect)
    return prey, pred, prey_rule


def decide_outcome(rec, params: ModelParams, detect: DetectConfig | None = None) -> Optional[Outcome]:
    """Outcome once both species are decided, else None (used for early stopping)."""
    detect = detect or DetectConfig()
    if len(rec["t"]) < 2:
        return None
    prey, pred, _ = _labels(rec, params, detect)
    if prey is None or pred is None:
        return None
    return Outcome(prey, pred)


def classify_outcome(traj, params: ModelParams | None = None, detect: DetectConfig | None = None) -> Outcome:
    params = params or traj.params
    detect = detect or DetectConfig()
    rec = traj.records
    prey, pred, prey_rule = _labels(rec, params, detect)
    t = rec["t"]
    tail = _tail(t, detect.window)
    evidence = {
        "t_end": float(t[-1]),
        "g_end": float(rec["g"][-1]),
        "h_end": float(rec["h"][-1]),
        "prey_barrier": prey_barrier(params),
        "predator_barrier": PREDATOR_BARRIER,
        "prey_rule": prey_rule,
        "trailing_umax": float(np.max(rec["umax"][tail])),
        "trailing_vmax": float(np.max(rec["vmax"][tail])),
        "trailing_gdot_max": float(np.max(rec["gdot"][tail])),
        "trailing_hdot_max": float(np.max(rec["hdot"][tail])),
        "window": detect.window,
    }
    return Outcome(prey or Classification.UNDECIDED, pred or Classification.UNDECIDED, evidence)


@dataclass
class SpeedReport:
    g_slope: Optional[float]
    g_stderr: Optional[float]
    h_slope: Optional[float]
    h_stderr: Optional[float]
    table: SpeedTable
    g_window: tuple
    h_window: tuple
    g_in_sandwich: Optional[bool]
    h_in_sandwich: Optional[bool]
    regime: dict

    def to_dict(self):
        out = asdict(self)
        out["g_window"] = list(self.g_window)
        out["h_window"] = list(self.h_window)
        return out


def _inside(value, window):
    if value is None:
        return None
    lo, hi = window
    return bool((lo is None or value >= lo) and value <= hi)


def measure_speeds(traj, params: ModelParams | None = None, table: SpeedTable | None = None) -> SpeedReport:
    """Trailing-half least-squares slopes of g(t), h(t), checked against the semi-wave sandwich
    (inflated by 5% on each side)."""
    params = params or traj.params
    table = table or speed_table(params)
    t = traj.records["t"]
    try:
        g_slope, g_err = fit_slope(t, traj.records["g"])
    except InsufficientData:
        g_slope = g_err = None
    try:
        h_slope, h_err = fit_slope(t, traj.records["h"])
    except InsufficientData:
        h_slope = h_err = None
    if g_slope is None and h_slope is None:
        raise InsufficientData("record too short to fit either front speed")
    lo_g = (1 - SANDWICH_SLACK) * table.kund_beta if table.kund_beta is not None else None
    g_window = (lo_g, (1 + SANDWICH_SLACK) * table.kbar_beta)
    h_window = ((1 - SANDWICH_SLACK) * table.kund_mu, (1 + SANDWICH_SLACK) * table.kbar_mu)
    try:
        regime = speed_regime_bounds(params)
    except RegimeError as exc:
        regime = {"regime": "not-applicable", "reason": str(exc)}
    return SpeedReport(g_slope, g_err, h_slope, h_err, table, g_window, h_window,
                       _inside(g_slope, g_window), _inside(h_slope, h_window), regime)


def speed_regime_bounds(params: ModelParams) -> dict:
    """Large-(beta, mu) speed expectations for the regimes da < 1 ("W") and
    d[a - b(1+ac)] > 1 + ac ("S"); other parameter sets get the generic envelope."""
    a, b, c, d = params.a, params.b, params.c, params.d
    if not a > b * (1 + a * c):
        raise RegimeError(f"speed regimes need a > b(1+ac); got a={a}, b(1+ac)={b * (1 + a * c)}")
    c1 = 2 * math.sqrt(d * a)
    c2 = 2 * math.sqrt(1 + a * c)
    c3 = 2 * math.sqrt(d * a - d * b * (1 + a * c))
    c4 = 2 * math.sqrt(d * a - d * b)
    c5 = 2 * math.sqrt((1 + a * c) * (1 - b * c))
    consts = {"c1": c1, "c2": c2, "c3": c3, "c4": c4, "c5": c5}
    if d * a < 1:
        return {"regime": "W", "prey_window": [c3, c4], "predator_speed": 2.0, **consts}
    if d * (a - b * (1 + a * c)) > 1 + a * c:
        return {"regime": "S", "prey_speed": c1, "predator_window": [c5, c2], **consts}
    return {"regime": "neither", "prey_window": [c3, c1], "predator_window": [2.0, c2], **consts}


def moving_frame_error(snapshots, k0: float, A: float, B: float):
    """Per snapshot: (t, sup |u - A|, sup |v - B|) over the physical window [0, k0 t]."""
    if k0 < 0:
        raise ValueError("k0 must be non-negative")
    out = []
    for snap in snapshots:
        edge = k0 * snap.t
        if edge > snap.x[-1] * (1 + 1e-12):
            raise InsufficientData(f"window [0, {edge:.6g}] exceeds snapshot domain [0, {snap.x[-1]:.6g}]")
        inside = snap.x <= edge
        inside[0] = True
        out.append((float(snap.t), float(np.max(np.abs(snap.u[inside] - A))),
                    float(np.max(np.abs(snap.v[inside] - B)))))
    return out
