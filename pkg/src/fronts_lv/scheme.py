"""Front-fixed finite-difference kernel shared by the scalar and coupled solvers.

A species living on (0, R(t)) is stored on the fixed grid y = x / R(t),
y in [0, 1], with ``n`` uniform nodes.  In these coordinates

    w_t = D / R^2 w_yy + (R'/R) y w_y + f(w),   w_y(0) = 0,  w(1) = 0,
    R'  = -gamma / R * w_y(1).

Diffusion and drift are advanced implicitly (one tridiagonal solve), the
reaction explicitly, and the front by explicit Euler from the old level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg.lapack import dgtsv

from .errors import SolverError

DT_POLICIES = ("diffusive", "cfl", "fixed")


@dataclass(frozen=True)
class SolverConfig:
    """Grid sizes, time-step policy and recording cadence.

    dt policies:
      diffusive  dt = min(dt, safety * dy^2 R^2 / D) over both species
      cfl        dt = min(dt, safety * dy R / R') -- front moves < safety cells per step
      fixed      dt as given
    """

    ny: int = 400
    nxi: int = 400
    dt_policy: str = "cfl"
    dt: float = 1e-3
    safety: float = 0.2
    t_max: float = 50.0
    record_dt: float = 0.1
    snapshot_dt: float = 0.0
    snapshot_nx: int = 401
    stop_on_decision: bool = False
    max_steps: int = 50_000_000
    clamp_tol: float = 1e-6

    def __post_init__(self):
        if self.ny < 16 or self.nxi < 16:
            raise ValueError("ny and nxi must be >= 16")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.dt_policy not in DT_POLICIES:
            raise ValueError(f"dt_policy must be one of {DT_POLICIES}")
        if not (self.dt > 0 and self.safety > 0 and self.record_dt > 0):
            raise ValueError("dt, safety and record_dt must be positive")
        if self.snapshot_dt < 0:
            raise ValueError("snapshot_dt must be >= 0")


@dataclass(frozen=True)
class DetectConfig:
    """Thresholds used to call spreading / vanishing from a finite run."""

    eps_vanish: float = 1e-4
    spread_margin: float = 0.2
    window: float = 5.0
    t_cap: float = 800.0
    growth_eps: float = 1e-3


@lru_cache(maxsize=64)
def grid(n: int) -> np.ndarray:
    """Uniform nodes on [0, 1] (shared, read-only)."""
    nodes = np.linspace(0.0, 1.0, n)
    nodes.setflags(write=False)
    return nodes


def front_slope(w: np.ndarray, dy: float) -> float:
    """Second-order one-sided w_y at y = 1."""
    return (3.0 * w[-1] - 4.0 * w[-2] + w[-3]) / (2.0 * dy)


def front_velocity(w: np.ndarray, dy: float, R: float, gamma: float) -> float:
    return -gamma * front_slope(w, dy) / R


def pick_dt(cfg: SolverConfig, fronts) -> float:
    """fronts: iterable of (R, Rdot, D, dy) for every active species."""
    dt = cfg.dt
    if cfg.dt_policy == "diffusive":
        for R, _, D, dy in fronts:
            dt = min(dt, cfg.safety * dy * dy * R * R / D)
    elif cfg.dt_policy == "cfl":
        for R, Rdot, _, dy in fronts:
            if Rdot > 0:
                dt = min(dt, cfg.safety * dy * R / Rdot)
    return dt


def implicit_advance(w, R, Rdot, D, y, dy, dt, reaction):
    """Advance ``w`` by one step.

    ``reaction`` is the per-node growth rate f(w)/w evaluated at the old level.
    Returns (w_new, clamped) where ``clamped`` is the integral (in y) of the
    negative part removed after the explicit reaction.
    """
    n = w.size
    rhs = w + dt * w * reaction
    rhs[-1] = 0.0
    neg = rhs < 0.0
    clamped = 0.0
    if neg.any():
        clamped = float(-rhs[neg].sum() * dy)
        rhs[neg] = 0.0

    alpha = dt * D / (R * R * dy * dy)
    drift = (dt * (Rdot / R) / (2.0 * dy)) * y[1:-1]
    diag = np.full(n, 1.0 + 2.0 * alpha)
    lower = np.empty(n - 1)
    upper = np.empty(n - 1)
    if drift[-1] <= alpha:
        np.subtract(drift, alpha, out=lower[:-1])
        np.subtract(-alpha, drift, out=upper[1:])
    else:
        # central drift while it keeps an M-matrix, upwind beyond that
        central = drift <= alpha
        lower[:-1] = np.where(central, drift - alpha, -alpha)
        upper[1:] = np.where(central, -alpha - drift, -alpha - 2.0 * drift)
        diag[1:-1] += np.where(central, 0.0, 2.0 * drift)
    # row 0 mirrors the Neumann condition; the last row is Dirichlet zero
    upper[0] = -2.0 * alpha
    lower[-1] = 0.0
    diag[-1] = 1.0

    _, _, _, x, info = dgtsv(lower, diag, upper, rhs[:, None], 1, 1, 1, 1)
    if info != 0:
        raise SolverError(f"tridiagonal solve failed (info={info})")
    out = x[:, 0]
    out[-1] = 0.0
    return out, clamped


def trapezoid(values: np.ndarray, dy: float) -> float:
    return float(dy * (values.sum() - 0.5 * (values[0] + values[-1])))


def check_finite(*arrays, where="step"):
    for arr in arrays:
        # a sum is non-finite iff some entry is (entries are bounded, so no overflow)
        if not math.isfinite(float(arr.sum())):
            raise SolverError(f"non-finite values produced during {where}")


def next_stop(t: float, dt: float, targets):
    """Shrink ``dt`` so that no target time in ``targets`` is stepped over.

    A step ending within 1e-6 dt short of a target is stretched onto it, so the
    clock never sits a rounding error below a target.
    Returns (dt, target) where target is the time the step lands on exactly, or None.
    """
    hit = None
    for target in targets:
        if target is not None and t < target <= t + dt * (1 + 1e-6):
            dt = target - t
            hit = target
    return dt, hit
