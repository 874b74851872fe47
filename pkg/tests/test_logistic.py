import math

import numpy as np
import pytest

from fronts_lv import (
    Classification,
    DetectConfig,
    InitialProfile,
    InsufficientData,
    SolverConfig,
    classify_scalar,
    front_speed,
    kappa,
    solve_logistic,
)
from fronts_lv.logistic_fb import ScalarFrontState, ScalarTrajectory, fit_slope

from runs import logistic_spreading_run

FAST = SolverConfig(ny=100, dt=1e-2, t_max=800.0, stop_on_decision=True)


def synthetic(t, rho, zmax, d=1.0, theta=1.0):
    t = np.asarray(t, float)
    rho = np.asarray(rho, float)
    rho_dot = np.gradient(rho, t) if t.size > 1 else np.zeros_like(t)
    return ScalarTrajectory(d, theta, 1.0, float(rho[0]), t, rho, rho_dot, np.asarray(zmax, float),
                            np.zeros_like(t), ScalarFrontState(float(t[-1]), float(rho[-1]), np.zeros(3)))


def test_large_habitat_spreads_for_tiny_gamma():
    rho0 = math.pi / 2 + 0.1
    traj = solve_logistic(1.0, 1.0, 0.01, rho0, InitialProfile.cosine(rho0, 0.5), FAST)
    assert traj.classification == Classification.SPREADING


def test_large_gamma_spreads_from_small_habitat():
    traj = solve_logistic(1.0, 1.0, 1e3, 0.5, InitialProfile.cosine(0.5, 1.0),
                          SolverConfig(ny=200, t_max=50.0, stop_on_decision=True))
    assert traj.classification == Classification.SPREADING


def explicit_fixed_domain(d, theta, gamma, rho0, amp, t_end, nx=41):
    """Independent coarse check: forward Euler on the fixed interval [0, rho0] (the front
    barely moves for tiny gamma), front displacement accumulated from the boundary flux."""
    x = np.linspace(0, rho0, nx)
    dx = x[1] - x[0]
    dt = 0.4 * dx * dx / d
    z = amp * np.cos(0.5 * np.pi * x / rho0)
    z[-1] = 0.0
    moved, t = 0.0, 0.0
    ts, zmax = [], []
    while t < t_end:
        flux = (3 * z[-1] - 4 * z[-2] + z[-3]) / (2 * dx)
        moved += -gamma * flux * dt
        lap = np.empty_like(z)
        lap[1:-1] = (z[2:] - 2 * z[1:-1] + z[:-2]) / dx**2
        lap[0] = 2 * (z[1] - z[0]) / dx**2
        lap[-1] = 0.0
        z = z + dt * (d * lap + z * (theta - z))
        z[-1] = 0.0
        t += dt
        ts.append(t)
        zmax.append(z.max())
    return rho0 + moved, np.array(ts), np.array(zmax)


def test_vanishing_capacity_matches_explicit_scheme():
    d, theta, gamma, rho0 = 1.0, 1e-8, 0.01, 0.5
    traj = solve_logistic(d, theta, gamma, rho0, InitialProfile.cosine(rho0, 1.0),
                          SolverConfig(ny=200, dt=1e-3, t_max=20.0, stop_on_decision=True))
    assert traj.classification == Classification.VANISHING
    rho_inf, ts, zmax = explicit_fixed_domain(d, theta, gamma, rho0, 1.0, 3.0)
    assert traj.rho[-1] - rho0 == pytest.approx(rho_inf - rho0, rel=0.05)
    # exponential decay rate of max z between t = 1 and t = 3
    sel = (traj.t >= 1.0) & (traj.t <= 3.0)
    rate = -np.polyfit(traj.t[sel], np.log(traj.zmax[sel]), 1)[0]
    sel_e = (ts >= 1.0) & (ts <= 3.0)
    rate_e = -np.polyfit(ts[sel_e], np.log(zmax[sel_e]), 1)[0]
    assert rate == pytest.approx(rate_e, rel=0.02)
    assert rate == pytest.approx(d * (0.5 * np.pi / rho0) ** 2, rel=0.02)


def test_invariants_hold_on_records():
    traj = solve_logistic(1.0, 1.0, 2.0, 1.0, InitialProfile.bump(1.0, 1.5),
                          SolverConfig(ny=200, t_max=10.0))
    assert np.all(np.diff(traj.rho) >= 0)
    assert np.all(traj.rho_dot >= -1e-12)
    assert np.all(traj.zmax <= 1.5 * (1 + 1e-6))
    assert traj.final.z[-1] == 0.0
    assert traj.diagnostics["clamp_mass"] == 0.0


def test_larger_capacity_pushes_front_further():
    z0 = InitialProfile.cosine(1.0, 0.5)
    cfg = SolverConfig(ny=200, t_max=8.0, record_dt=0.5)
    low = solve_logistic(1.0, 1.0, 2.0, 1.0, z0, cfg)
    high = solve_logistic(1.0, 1.5, 2.0, 1.0, z0, cfg)
    assert np.all(high.rho >= low.rho - 1e-12)
    assert high.rho[-1] > low.rho[-1]


def test_classifier_rules():
    det = DetectConfig()
    barrier = 0.5 * math.pi
    crossing = synthetic(np.linspace(0, 10, 101), np.linspace(1.0, 1.25 * barrier, 101), np.ones(101))
    assert classify_scalar(crossing, det) == Classification.SPREADING
    dead = synthetic(np.linspace(0, 10, 101), np.full(101, 1.0), np.full(101, 1e-10))
    assert classify_scalar(dead, det) == Classification.VANISHING
    short = synthetic(np.linspace(0, 1, 11), np.full(11, 1.0), np.full(11, 1e-10))
    assert classify_scalar(short, det) == Classification.UNDECIDED
    # past the bare barrier but inside the margin: not yet called
    near = synthetic(np.linspace(0, 10, 101), np.linspace(1.0, 1.1 * barrier, 101), np.ones(101))
    assert classify_scalar(near, det) == Classification.UNDECIDED


def test_front_speed_exact_lines():
    t = np.linspace(0, 10, 101)
    slope, err = front_speed(synthetic(t, 3 * t + 1, np.ones_like(t)))
    assert slope == pytest.approx(3.0, abs=1e-12)
    assert err == pytest.approx(0.0, abs=1e-10)
    slope, _ = front_speed(synthetic(t, np.full_like(t, 2.0), np.ones_like(t)))
    assert slope == 0.0
    with pytest.raises(InsufficientData):
        fit_slope(t[:15], t[:15])


def test_front_speed_matches_semiwave():
    traj = logistic_spreading_run()
    slope, _ = front_speed(traj)
    assert slope == pytest.approx(kappa(5.0, 1.0, 1.0), rel=0.05)


def test_refinement_order():
    z0 = InitialProfile.cosine(1.0, 1.0)
    rho = []
    for n in (51, 101, 201, 401):
        cfg = SolverConfig(ny=n, dt_policy="fixed", dt=1e-4, t_max=1.0, record_dt=1.0)
        rho.append(solve_logistic(1.0, 1.0, 2.0, 1.0, z0, cfg).final.rho)
    diffs = np.abs(np.diff(rho))
    assert diffs[0] / diffs[1] >= 1.8 and diffs[1] / diffs[2] >= 1.8


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        solve_logistic(1.0, 0.0, 1.0, 1.0, InitialProfile.cosine(1.0))
