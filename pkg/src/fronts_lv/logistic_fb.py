"""Single-species logistic equation with one Stefan free boundary.

    z_t - d z_xx = z (theta - z),  0 < x < rho(t)
    z_x(t, 0) = 0, z(t, rho) = 0,  rho' = -gamma z_x(t, rho)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InsufficientData, InvariantBreach, SolverError
from .model import InitialProfile
from .scheme import (
    DetectConfig,
    SolverConfig,
    check_finite,
    front_velocity,
    grid,
    implicit_advance,
    next_stop,
    pick_dt,
    trapezoid,
)


class Classification(str, Enum):
    SPREADING = "spreading"
    VANISHING = "vanishing"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ScalarFrontState:
    t: float
    rho: float
    z: np.ndarray

    @property
    def y(self):
        return grid(self.z.size)


@dataclass
class ScalarTrajectory:
    d: float
    theta: float
    gamma: float
    rho0: float
    t: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    zmax: np.ndarray
    mass: np.ndarray
    final: ScalarFrontState
    classification: Classification = Classification.UNDECIDED
    diagnostics: dict = field(default_factory=dict)

    @property
    def barrier(self) -> float:
        return 0.5 * math.pi * math.sqrt(self.d / self.theta)


def decide_species(t, rho, rho_dot, zmax, barrier, detect: DetectConfig):
    """Spreading / Vanishing verdict from recorded series, or None if undecided.

    ``barrier`` may be None when no sufficient spreading barrier is known.
    """
    if barrier is not None and rho[-1] > barrier * (1.0 + detect.spread_margin):
        return Classification.SPREADING
    if t[-1] - t[0] >= detect.window:
        tail = t >= t[-1] - detect.window
        if np.all(zmax[tail] < detect.eps_vanish) and np.all(rho_dot[tail] < detect.eps_vanish):
            return Classification.VANISHING
    return None


def classify_scalar(traj: ScalarTrajectory, detect: DetectConfig | None = None) -> Classification:
    """Spreading once the front passes the (pi/2) sqrt(d/theta) barrier with margin;
    vanishing once density and front speed stay below eps over the trailing window."""
    detect = detect or DetectConfig()
    verdict = decide_species(traj.t, traj.rho, traj.rho_dot, traj.zmax, traj.barrier, detect)
    return verdict or Classification.UNDECIDED


def solve_logistic(
    d: float,
    theta: float,
    gamma: float,
    rho0: float,
    z0: InitialProfile,
    cfg: SolverConfig | None = None,
    detect: DetectConfig | None = None,
) -> ScalarTrajectory:
    cfg = cfg or SolverConfig()
    detect = detect or DetectConfig()
    for name, value in (("d", d), ("theta", theta), ("gamma", gamma), ("rho0", rho0)):
        if not value > 0:
            raise ValueError(f"{name} must be positive")
    if abs(z0.support - rho0) > 1e-12 * rho0:
        z0 = z0.with_support(rho0)

    n = cfg.ny
    y = grid(n)
    dy = 1.0 / (n - 1)
    z = z0.value(rho0 * y)
    z[-1] = 0.0
    rho = float(rho0)
    t = 0.0

    z_ceiling = max(theta, z0.sup()) * (1.0 + 1e-6)
    speed_ceiling = 2.0 * gamma * max(max(theta, z0.sup()) * math.sqrt(theta / (2.0 * d)), -z0.min_slope())
    speed_ceiling *= 1.0 + 1e-3
    mass0 = rho * trapezoid(z, dy)
    clamp_mass = 0.0
    barrier = 0.5 * math.pi * math.sqrt(d / theta)

    rec_t, rec_rho, rec_rhod, rec_zmax, rec_mass = [], [], [], [], []
    next_record = 0.0
    verdict = None
    steps = 0
    while True:
        rhodot = front_velocity(z, dy, rho, gamma)
        if rhodot < -1e-12:
            raise InvariantBreach(f"front receded: rho'={rhodot:.3e} at t={t:.6g}", {"t": t})
        if rhodot > speed_ceiling:
            raise InvariantBreach(f"front speed {rhodot:.6g} above a-priori bound {speed_ceiling:.6g}", {"t": t})
        if t >= next_record - 1e-12 * max(1.0, t):
            rec_t.append(t)
            rec_rho.append(rho)
            rec_rhod.append(rhodot)
            rec_zmax.append(float(z.max()))
            rec_mass.append(rho * trapezoid(z, dy))
            next_record = len(rec_t) * cfg.record_dt
            if cfg.stop_on_decision:
                verdict = decide_species(np.asarray(rec_t), np.asarray(rec_rho), np.asarray(rec_rhod),
                                        np.asarray(rec_zmax), barrier, detect)
                if verdict is not None:
                    break
        if t >= cfg.t_max - 1e-12 * cfg.t_max:
            break
        if steps >= cfg.max_steps:
            raise SolverError("step budget exhausted", {"t": t, "steps": steps})

        dt = pick_dt(cfg, [(rho, rhodot, d, dy)])
        dt, landing = next_stop(t, dt, (next_record, cfg.t_max))
        if dt < 1e-14:
            raise SolverError("time step underflow", {"t": t, "dt": dt})
        z, clamped = implicit_advance(z, rho, rhodot, d, y, dy, dt, theta - z)
        rho += dt * rhodot
        t = landing if landing is not None else t + dt
        steps += 1
        clamp_mass += clamped * rho
        check_finite(z)
        if clamp_mass > cfg.clamp_tol * max(mass0, 1e-300):
            raise SolverError("negative-density clamp mass above tolerance",
                              {"t": t, "clamp_mass": clamp_mass})
        zmax = z.max()
        if zmax > z_ceiling or z.min() < 0.0:
            raise InvariantBreach(f"density {zmax:.6g} outside [0, {z_ceiling:.6g}] at t={t:.6g}", {"t": t})

    traj = ScalarTrajectory(
        d=d, theta=theta, gamma=gamma, rho0=rho0,
        t=np.asarray(rec_t), rho=np.asarray(rec_rho), rho_dot=np.asarray(rec_rhod),
        zmax=np.asarray(rec_zmax), mass=np.asarray(rec_mass),
        final=ScalarFrontState(t, rho, z),
        diagnostics={"steps": steps, "clamp_mass": clamp_mass},
    )
    traj.classification = verdict or classify_scalar(traj, detect)
    return traj


def fit_slope(t, x, min_points: int = 10):
    """Least-squares slope of x(t) over the trailing half of the record, with its standard error."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    tail = t >= t[0] + 0.5 * (t[-1] - t[0])
    tt, xx = t[tail], x[tail]
    if tt.size < min_points:
        raise InsufficientData(f"need >= {min_points} samples in the trailing half, have {tt.size}")
    tm = tt - tt.mean()
    sxx = float(tm @ tm)
    if sxx == 0.0:
        raise InsufficientData("degenerate time samples")
    slope = float(tm @ (xx - xx.mean())) / sxx
    resid = xx - xx.mean() - slope * tm
    dof = tt.size - 2
    stderr = math.sqrt(float(resid @ resid) / dof / sxx) if dof > 0 else float("nan")
    return slope, stderr


def front_speed(traj: ScalarTrajectory):
    """(slope, stderr) of rho(t) over the trailing half of the record."""
    return fit_slope(traj.t, traj.rho)
