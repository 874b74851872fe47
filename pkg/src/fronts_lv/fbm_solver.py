"""Coupled prey-predator system with two independent Stefan fronts.

Prey u lives on (0, g(t)) and is stored as w(y) with x = g y; predator v
lives on (0, h(t)) and is stored as phi(xi) with x = h xi.  Each species has
its own front-fixed grid; the coupling terms are read across grids by linear
interpolation, with the other species taken as exactly zero beyond its front.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvariantBreach, SolverError
from .model import DerivedConstants, InitialProfile, ModelParams, derive_constants
from .scheme import (
    SolverConfig,
    check_finite,
    grid,
    front_velocity,
    implicit_advance,
    next_stop,
    pick_dt,
    trapezoid,
)

RECORD_FIELDS = ("t", "g", "h", "gdot", "hdot", "umax", "vmax", "u_at_0", "v_at_0", "mass_u", "mass_v")


@dataclass(frozen=True)
class FrontState:
    t: float
    g: float
    h: float
    w: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        if self.w.size < 3 or self.phi.size < 3:
            raise ValueError("grids need at least 3 nodes")

    @property
    def y(self):
        return grid(self.w.size)

    @property
    def xi(self):
        return grid(self.phi.size)


@dataclass
class Snapshot:
    t: float
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass
class Trajectory:
    params: ModelParams
    records: dict
    snapshots: list = field(default_factory=list)
    final: FrontState | None = None
    diagnostics: dict = field(default_factory=dict)

    def __getattr__(self, name):
        records = self.__dict__.get("records")
        if records is not None and name in records:
            return records[name]
        raise AttributeError(name)

    def __len__(self):
        return len(self.records["t"])


def initial_state(params: ModelParams, u0: InitialProfile, v0: InitialProfile, cfg: SolverConfig) -> FrontState:
    if abs(u0.support - params.g0) > 1e-12 * params.g0:
        u0 = u0.with_support(params.g0)
    if abs(v0.support - params.h0) > 1e-12 * params.h0:
        v0 = v0.with_support(params.h0)
    y = grid(cfg.ny)
    xi = grid(cfg.nxi)
    w = u0.value(params.g0 * y)
    phi = v0.value(params.h0 * xi)
    w[-1] = 0.0
    phi[-1] = 0.0
    return FrontState(0.0, float(params.g0), float(params.h0), w, phi)


def predator_on_prey_grid(state: FrontState) -> np.ndarray:
    """v evaluated at the prey nodes x = g y (zero beyond the predator front)."""
    x = state.g * state.y
    v = np.interp(x / state.h, state.xi, state.phi)
    return np.where(x > state.h, 0.0, v)


def prey_on_predator_grid(state: FrontState) -> np.ndarray:
    """u evaluated at the predator nodes x = h xi (zero beyond the prey front)."""
    x = state.h * state.xi
    u = np.interp(x / state.g, state.y, state.w)
    return np.where(x > state.g, 0.0, u)


def velocities(state: FrontState, params: ModelParams):
    dy = 1.0 / (state.w.size - 1)
    dxi = 1.0 / (state.phi.size - 1)
    return (float(front_velocity(state.w, dy, state.g, params.beta)),
            float(front_velocity(state.phi, dxi, state.h, params.mu)))


def _advance(state: FrontState, params: ModelParams, cfg: SolverConfig, dt=None, vel=None):
    ny, nxi = state.w.size, state.phi.size
    dy, dxi = 1.0 / (ny - 1), 1.0 / (nxi - 1)
    y, xi = state.y, state.xi
    gdot, hdot = vel if vel is not None else velocities(state, params)
    if dt is None:
        dt = pick_dt(cfg, [(state.g, gdot, params.d, dy), (state.h, hdot, 1.0, dxi)])
    v_here = predator_on_prey_grid(state)
    u_here = prey_on_predator_grid(state)
    w, clamp_u = implicit_advance(state.w, state.g, gdot, params.d, y, dy, dt,
                                  params.a - state.w - params.b * v_here)
    phi, clamp_v = implicit_advance(state.phi, state.h, hdot, 1.0, xi, dxi, dt,
                                    1.0 - state.phi + params.c * u_here)
    new = FrontState(state.t + dt, state.g + dt * gdot, state.h + dt * hdot, w, phi)
    return new, gdot, hdot, clamp_u * new.g, clamp_v * new.h


def step(state: FrontState, params: ModelParams, cfg: SolverConfig, dt: float | None = None) -> FrontState:
    """Advance one time step (dt chosen by the config policy unless given)."""
    new, *_ = _advance(state, params, cfg, dt)
    check_finite(new.w, new.phi)
    return new


def resample_physical(state: FrontState, nx: int):
    """(x, u, v) on a uniform grid over [0, max(g, h)], undoing both front-fixing maps."""
    x = np.linspace(0.0, max(state.g, state.h), nx)
    u = np.where(x > state.g, 0.0, np.interp(x / state.g, state.y, state.w))
    v = np.where(x > state.h, 0.0, np.interp(x / state.h, state.xi, state.phi))
    return x, u, v


class _Monitor:
    """Runtime check of the a-priori density and front-speed ceilings."""

    def __init__(self, consts: DerivedConstants):
        self.u_cap = consts.M1 * (1.0 + 1e-6)
        self.v_cap = consts.M2 * (1.0 + 1e-6)
        self.g_cap = consts.prey_speed_bound * (1.0 + 1e-3)
        self.h_cap = consts.pred_speed_bound * (1.0 + 1e-3)
        self.max_ratio = {"u": 0.0, "v": 0.0, "gdot": 0.0, "hdot": 0.0}
        self.min_front_speed = math.inf

    def check_state(self, state: FrontState):
        umax, vmax = float(state.w.max()), float(state.phi.max())
        self.max_ratio["u"] = max(self.max_ratio["u"], umax / self.u_cap)
        self.max_ratio["v"] = max(self.max_ratio["v"], vmax / self.v_cap)
        if umax > self.u_cap or vmax > self.v_cap:
            raise InvariantBreach(
                f"density bound breached at t={state.t:.6g}: max u={umax:.6g} (cap {self.u_cap:.6g}), "
                f"max v={vmax:.6g} (cap {self.v_cap:.6g})", {"t": state.t, "umax": umax, "vmax": vmax})
        if state.w.min() < 0.0 or state.phi.min() < 0.0:
            raise InvariantBreach(f"negative density at t={state.t:.6g}", {"t": state.t})

    def check_speeds(self, t, gdot, hdot):
        self.max_ratio["gdot"] = max(self.max_ratio["gdot"], gdot / self.g_cap)
        self.max_ratio["hdot"] = max(self.max_ratio["hdot"], hdot / self.h_cap)
        self.min_front_speed = min(self.min_front_speed, gdot, hdot)
        if gdot < -1e-12 or hdot < -1e-12:
            raise InvariantBreach(f"front receded at t={t:.6g}: g'={gdot:.3e}, h'={hdot:.3e}", {"t": t})
        if gdot > self.g_cap or hdot > self.h_cap:
            raise InvariantBreach(
                f"front speed bound breached at t={t:.6g}: g'={gdot:.6g} (cap {self.g_cap:.6g}), "
                f"h'={hdot:.6g} (cap {self.h_cap:.6g})", {"t": t, "gdot": gdot, "hdot": hdot})

    def summary(self):
        return {
            "bounds": {"M1": self.u_cap / (1 + 1e-6), "M2": self.v_cap / (1 + 1e-6),
                       "gdot_max": self.g_cap / (1 + 1e-3), "hdot_max": self.h_cap / (1 + 1e-3)},
            "max_ratio_to_bound": dict(self.max_ratio),
            "min_front_speed": self.min_front_speed,
            "ok": True,
        }


def simulate(params: ModelParams, u0: InitialProfile, v0: InitialProfile,
             cfg: SolverConfig | None = None, detect=None) -> Trajectory:
    """Integrate to cfg.t_max (or until both species are classified, if cfg.stop_on_decision)."""
    from .analysis import decide_outcome  # analysis depends on this module

    cfg = cfg or SolverConfig()
    consts = derive_constants(params, u0, v0)
    monitor = _Monitor(consts)
    state = initial_state(params, u0, v0, cfg)
    dy, dxi = 1.0 / (cfg.ny - 1), 1.0 / (cfg.nxi - 1)
    mass0 = state.g * trapezoid(state.w, dy) + state.h * trapezoid(state.phi, dxi)
    clamp_mass = 0.0

    rec = {name: [] for name in RECORD_FIELDS}
    snapshots = []
    next_record, next_snap = 0.0, 0.0 if cfg.snapshot_dt > 0 else None
    steps = 0
    monitor.check_state(state)
    while True:
        gdot, hdot = velocities(state, params)
        monitor.check_speeds(state.t, gdot, hdot)
        t = state.t
        if t >= next_record - 1e-12 * max(1.0, t):
            for name, value in zip(RECORD_FIELDS, (
                    t, state.g, state.h, gdot, hdot, float(state.w.max()), float(state.phi.max()),
                    float(state.w[0]), float(state.phi[0]),
                    state.g * trapezoid(state.w, dy), state.h * trapezoid(state.phi, dxi))):
                rec[name].append(value)
            next_record = len(rec["t"]) * cfg.record_dt
            if cfg.stop_on_decision and decide_outcome(rec, params, detect) is not None:
                break
        if next_snap is not None and t >= next_snap - 1e-12 * max(1.0, t):
            snapshots.append(Snapshot(t, *resample_physical(state, cfg.snapshot_nx)))
            next_snap = len(snapshots) * cfg.snapshot_dt
        if t >= cfg.t_max * (1.0 - 1e-12):
            break
        if steps >= cfg.max_steps:
            raise SolverError("step budget exhausted", {"t": t, "steps": steps})

        dt = pick_dt(cfg, [(state.g, gdot, params.d, dy), (state.h, hdot, 1.0, dxi)])
        dt, landing = next_stop(t, dt, (next_record, next_snap, cfg.t_max))
        if dt < 1e-14:
            raise SolverError("time step underflow", {"t": t, "dt": dt})
        state, _, _, cu, cv = _advance(state, params, cfg, dt, (gdot, hdot))
        if landing is not None:
            state = replace(state, t=landing)
        steps += 1
        clamp_mass += cu + cv
        check_finite(state.w, state.phi)
        if clamp_mass > cfg.clamp_tol * mass0:
            raise SolverError("negative-density clamp mass above tolerance",
                              {"t": state.t, "clamp_mass": clamp_mass, "mass0": mass0})
        monitor.check_state(state)

    records = {name: np.asarray(values, dtype=float) for name, values in rec.items()}
    return Trajectory(params=params, records=records, snapshots=snapshots, final=state,
                      diagnostics={"steps": steps, "clamp_mass": clamp_mass, "monitor": monitor.summary()})
