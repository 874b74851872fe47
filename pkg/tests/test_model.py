import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fronts_lv import InitialProfile, ModelParams, RegimeError, derive_constants, iterate_coexistence_bounds


def params(**kw):
    base = dict(a=2.0, b=0.5, c=0.5, d=1.0, beta=10.0, mu=10.0, g0=3.0, h0=2.0)
    base.update(kw)
    return ModelParams(**base)


def test_params_reject_nonpositive_and_crossed_fronts():
    for key in ("a", "b", "c", "d", "beta", "mu", "g0", "h0"):
        with pytest.raises(ValueError):
            params(**{key: 0.0})
    with pytest.raises(ValueError):
        params(a=float("nan"))
    with pytest.raises(ValueError):
        params(g0=1.0, h0=2.0)


def test_prey_sup_bound_takes_initial_sup():
    p = params(a=2.0)
    c = derive_constants(p, InitialProfile.cosine(3.0, 3.0), InitialProfile.cosine(2.0, 1.0))
    assert c.M1 == 3.0
    assert c.M2 == max(1 + 0.5 * 3.0, 1.0)


def test_coexistence_state():
    c = derive_constants(params(), InitialProfile.cosine(3.0), InitialProfile.cosine(2.0))
    assert c.A == pytest.approx(1.2, abs=1e-15)
    assert c.B == pytest.approx(1.6, abs=1e-15)


def test_speed_constants_closed_form():
    c = derive_constants(params(), InitialProfile.cosine(3.0), InitialProfile.cosine(2.0))
    assert c.c1 == pytest.approx(2 * math.sqrt(2))
    assert c.c3 == pytest.approx(2.0)
    assert c.c4 == pytest.approx(2 * math.sqrt(1.5))
    assert c.c2 == pytest.approx(2 * math.sqrt(2.0))
    assert c.c5 == pytest.approx(2 * math.sqrt(2.0 * 0.75))
    assert c.c3 < c.c4 < c.c1


def test_undefined_constants_are_none_not_nan():
    # strong predation: no coexistence state, no prey sub-capacity speeds
    c = derive_constants(params(a=1.0, b=3.0), InitialProfile.cosine(3.0), InitialProfile.cosine(2.0))
    assert c.A is None and c.B is None
    assert c.c3 is None and c.c4 is None
    c = derive_constants(params(b=2.5, c=0.5), InitialProfile.cosine(3.0), InitialProfile.cosine(2.0))
    assert c.c5 is None  # 1 - bc < 0


def test_front_speed_constant_uses_steepest_slope():
    v0 = InitialProfile.cosine(0.5, 1.0)  # slope pi at the front dominates
    p = params(a=1.0, c=0.5, g0=8.0, h0=0.5)
    c = derive_constants(p, InitialProfile.cosine(8.0), v0)
    assert c.K == pytest.approx(2 * math.pi)
    assert c.pred_speed_bound == pytest.approx(p.mu * 2 * math.pi)


def test_iteration_one_step():
    (u_hi, v_hi, u_lo, v_lo), = iterate_coexistence_bounds(params(), 1)
    assert (u_hi, v_hi, u_lo, v_lo) == pytest.approx((1.5, 1.75, 1.125, 1.5625), abs=1e-15)


def test_iteration_converges_to_coexistence_state():
    seq = iterate_coexistence_bounds(params(), 50)
    u_hi, v_hi, u_lo, v_lo = seq[-1]
    for value, target in ((u_hi, 1.2), (u_lo, 1.2), (v_hi, 1.6), (v_lo, 1.6)):
        assert abs(value - target) < 1e-10


def test_iteration_decoupled_limit():
    (u_hi, v_hi, _, _), = iterate_coexistence_bounds(params(b=1e-9), 1)
    assert u_hi == pytest.approx(2.0, abs=1e-8)
    assert v_hi == pytest.approx(1 + 0.5 * 2.0, abs=1e-8)


def test_iteration_regime_error():
    with pytest.raises(RegimeError):
        iterate_coexistence_bounds(params(a=1.0, b=3.0), 5)
    with pytest.raises(RegimeError):
        iterate_coexistence_bounds(params(a=1.0, b=0.9, c=0.5), 5)  # a < b(1+ac)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.2, 5.0), bfrac=st.floats(0.01, 0.95), c=st.floats(0.01, 2.0))
def test_iteration_brackets_monotonically(a, bfrac, c):
    # b chosen inside the weak-predation regime with a > b(1+ac)
    b = bfrac * min(a / (1 + a * c), 1 / c)
    p = params(a=a, b=b, c=c)
    A, B = (a - b) / (1 + b * c), (1 + a * c) / (1 + b * c)
    seq = iterate_coexistence_bounds(p, 30)
    tol = 1e-12
    prev = None
    for u_hi, v_hi, u_lo, v_lo in seq:
        assert u_lo - tol <= A <= u_hi + tol
        assert v_lo - tol <= B <= v_hi + tol
        if prev is not None:
            assert u_hi <= prev[0] + tol and v_hi <= prev[1] + tol
            assert u_lo >= prev[2] - tol and v_lo >= prev[3] - tol
        prev = (u_hi, v_hi, u_lo, v_lo)


@pytest.mark.parametrize("kind", ["cosine", "bump"])
def test_closed_form_profiles(kind):
    prof = getattr(InitialProfile, kind)(2.5, 1.7)
    assert prof.value(0.0) == pytest.approx(1.7)
    assert prof.derivative(0.0) == 0.0
    assert prof.value(2.5) == 0.0
    assert prof.value(3.0) == 0.0
    xs = np.linspace(0, 2.5, 2001)[:-1]
    assert np.all(prof.value(xs) > 0)
    assert prof.min_slope() == pytest.approx(np.min(prof.derivative(np.linspace(0, 2.5, 200001))), rel=1e-6)


def test_cosine_front_is_exactly_zero():
    prof = InitialProfile.cosine(1.3, 2.0)
    assert float(prof.value(np.array([1.3]))[0]) == 0.0


def test_tabulated_profile_matches_source():
    xs = np.linspace(0, 2.0, 41)
    vals = np.cos(0.5 * np.pi * xs / 2.0)
    vals[-1] = 0.0
    prof = InitialProfile.tabulated(xs, vals)
    grid = np.linspace(0, 2.0, 301)
    assert np.max(np.abs(prof.value(grid)[:-1] - np.cos(0.5 * np.pi * grid / 2.0)[:-1])) < 1e-5
    assert prof.derivative(0.0) == pytest.approx(0.0, abs=1e-12)
    assert prof.min_slope() == pytest.approx(-0.5 * np.pi / 2.0, rel=1e-3)
    moved = prof.with_support(3.0)
    assert moved.support == pytest.approx(3.0)
    assert moved.value(0.0) == pytest.approx(1.0)


def test_tabulated_profile_validation():
    with pytest.raises(ValueError):
        InitialProfile.tabulated([0, 1, 2, 3], [1, 1, 1, 1])  # not zero at the front
    with pytest.raises(ValueError):
        InitialProfile.tabulated([0, 2, 1, 3], [1, 1, 1, 0])
    with pytest.raises(ValueError):
        InitialProfile.tabulated([0, 1, 2, 3], [1, -1, 1, 0])


@settings(max_examples=40, deadline=None)
@given(s=st.floats(0.05, 50.0), amp=st.floats(0.01, 10.0))
def test_profile_invariants_property(s, amp):
    for prof in (InitialProfile.cosine(s, amp), InitialProfile.bump(s, amp)):
        assert prof.derivative(0.0) == 0.0
        assert prof.value(s) == 0.0
        assert prof.sup() == amp
        assert prof.min_slope() < 0
