import math
from types import SimpleNamespace

import numpy as np
import pytest

from fronts_lv import (
    Classification,
    InsufficientData,
    ModelParams,
    RegimeError,
    SolverConfig,
    classify_outcome,
    measure_speeds,
    moving_frame_error,
    simulate,
    speed_regime_bounds,
)
from fronts_lv.analysis import decide_outcome, prey_barrier
from fronts_lv.fbm_solver import Snapshot

from runs import STRONG, WEAK, cosine_pair, strong_run, weak_medium_run

S, V = Classification.SPREADING, Classification.VANISHING


def test_regime_w_window():
    r = speed_regime_bounds(ModelParams(a=2.0, b=0.1, c=0.1, d=0.25, beta=1, mu=1, g0=2, h0=1))
    assert r["regime"] == "W"
    assert r["prey_window"] == pytest.approx([2 * math.sqrt(0.47), 2 * math.sqrt(0.475)])
    assert r["predator_speed"] == 2.0


def test_regime_s_speed():
    r = speed_regime_bounds(ModelParams(a=2.0, b=0.1, c=0.1, d=8.0, beta=1, mu=1, g0=2, h0=1))
    assert r["regime"] == "S"
    assert r["prey_speed"] == pytest.approx(8.0)
    lo, hi = r["predator_window"]
    assert lo == pytest.approx(r["c5"]) and hi == pytest.approx(r["c2"])


def test_regime_constants_collapse_without_predation():
    r = speed_regime_bounds(ModelParams(a=2.0, b=1e-12, c=0.1, d=0.25, beta=1, mu=1, g0=2, h0=1))
    assert r["c3"] == pytest.approx(r["c1"], rel=1e-9)
    assert r["c4"] == pytest.approx(r["c1"], rel=1e-9)
    assert r["c5"] == pytest.approx(r["c2"], rel=1e-9)


def test_regime_requires_weak_predation():
    with pytest.raises(RegimeError):
        speed_regime_bounds(ModelParams(a=1.0, b=0.9, c=0.5, d=1, beta=1, mu=1, g0=2, h0=1))


def test_prey_barrier():
    assert prey_barrier(WEAK) == pytest.approx(0.5 * math.pi * math.sqrt(1.0 / (2.0 - 0.5 * 2.0)))
    assert prey_barrier(STRONG) is None


def snapshot(t, x, u, v):
    return Snapshot(t, np.asarray(x, float), np.asarray(u, float), np.asarray(v, float))


def test_moving_frame_error_windows():
    x = np.linspace(0, 10, 11)
    snaps = [snapshot(1.0, x, 1.2 + 0.01 * x, 1.6 - 0.02 * x), snapshot(2.0, x, 1.2 + 0.01 * x, 1.6 + 0 * x)]
    errs = moving_frame_error(snaps, 2.0, 1.2, 1.6)
    assert errs[0] == pytest.approx((1.0, 0.02, 0.04))
    assert errs[1] == pytest.approx((2.0, 0.04, 0.0))
    # k0 = 0 keeps only the origin
    assert moving_frame_error(snaps[:1], 0.0, 1.2, 1.6)[0] == pytest.approx((1.0, 0.0, 0.0))
    with pytest.raises(InsufficientData):
        moving_frame_error(snaps, 6.0, 1.2, 1.6)
    with pytest.raises(ValueError):
        moving_frame_error(snaps, -1.0, 1.2, 1.6)


def test_decoupled_species_both_spread():
    p = ModelParams(a=2.0, b=1e-12, c=1e-12, d=1.0, beta=10.0, mu=10.0, g0=3.0, h0=2.0)
    u0, v0 = cosine_pair(p)
    traj = simulate(p, u0, v0, SolverConfig(ny=100, nxi=100, t_max=30.0, stop_on_decision=True))
    out = classify_outcome(traj)
    assert (out.prey, out.predator) == (S, S)
    assert out.evidence["prey_rule"] == "barrier"


def test_small_slow_habitats_both_vanish():
    p = ModelParams(a=1.0, b=0.5, c=0.5, d=1.0, beta=0.01, mu=0.01, g0=0.5, h0=0.5)
    u0, v0 = cosine_pair(p)
    traj = simulate(p, u0, v0, SolverConfig(ny=100, nxi=100, t_max=40.0, stop_on_decision=True))
    out = classify_outcome(traj)
    assert (out.prey, out.predator) == (V, V)
    assert traj.t[-1] < 40.0  # stopped early once both were decided
    assert out.evidence["trailing_umax"] < 1e-4


def test_classification_survives_record_thinning():
    _, traj = weak_medium_run()
    full = classify_outcome(traj)
    thin = SimpleNamespace(records={k: v[::2] for k, v in traj.records.items()}, params=traj.params)
    half = classify_outcome(thin)
    assert (full.prey, full.predator) == (half.prey, half.predator) == (S, S)


def test_decide_outcome_waits_for_both_species():
    rec = {k: np.zeros(1) for k in ("t", "g", "h", "gdot", "hdot", "umax", "vmax")}
    assert decide_outcome(rec, WEAK) is None


def test_strong_predation_prey_dies_predator_saturates():
    traj = strong_run()
    out = classify_outcome(traj)
    assert (out.prey, out.predator) == (V, S)
    tail = traj.t >= 0.9 * traj.t[-1]
    assert np.max(traj.umax[tail]) < 1e-3
    assert np.all(np.abs(traj.v_at_0[tail] - 1.0) < 0.02)


def test_speed_report_structure():
    _, traj = weak_medium_run()
    rep = measure_speeds(traj)
    assert rep.g_slope > 0 and rep.h_slope > 0
    lo, hi = rep.g_window
    assert lo == pytest.approx(0.95 * rep.table.kund_beta) and hi == pytest.approx(1.05 * rep.table.kbar_beta)
    assert rep.regime["regime"] == "neither"
    assert set(rep.to_dict()) >= {"g_slope", "h_slope", "g_in_sandwich", "h_in_sandwich"}
    short = SimpleNamespace(records={k: v[:5] for k, v in traj.records.items()}, params=traj.params)
    with pytest.raises(InsufficientData):
        measure_speeds(short)
