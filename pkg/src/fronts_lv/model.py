"""Model parameters, closed-form derived constants and initial profiles.

Nothing in here integrates anything; every quantity is plain arithmetic on
the inputs so it can be used freely by the solvers and the reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import RegimeError

PROFILE_KINDS = ("cosine", "bump", "tabulated")


@dataclass(frozen=True)
class ModelParams:
    a: float
    b: float
    c: float
    d: float
    beta: float
    mu: float
    g0: float
    h0: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "beta", "mu", "g0", "h0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")
        if self.h0 > self.g0:
            raise ValueError(f"h0={self.h0} must not exceed g0={self.g0}")

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    @property
    def weak_predation(self) -> bool:
        return self.b < self.a and self.b * self.c < 1.0

    @property
    def strong_predation(self) -> bool:
        return self.b >= self.a

    @property
    def prey_sub_capacity(self) -> float:
        """a - b(1+ac): carrying capacity of the prey under the heaviest predation bound."""
        return self.a - self.b * (1.0 + self.a * self.c)


@dataclass(frozen=True)
class InitialProfile:
    """An initial density on [0, support] with zero slope at 0 and zero value at the front.

    ``table`` is only used by the tabulated kind: a pair (x_samples, values)
    with x_samples[0] == 0 and x_samples[-1] == support.
    """

    kind: str = "cosine"
    support: float = 1.0
    amplitude: float = 1.0
    table: Optional[tuple] = None
    _spline: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if not self.support > 0:
            raise ValueError("support must be positive")
        if self.kind == "tabulated":
            if self.table is None:
                raise ValueError("tabulated profile needs a table")
            xs = np.asarray(self.table[0], dtype=float)
            vs = np.asarray(self.table[1], dtype=float)
            if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 4:
                raise ValueError("table must be two equal-length 1-D sequences with >= 4 samples")
            if np.any(np.diff(xs) <= 0):
                raise ValueError("table abscissae must be strictly increasing")
            if abs(xs[0]) > 1e-12 or abs(xs[-1] - self.support) > 1e-9 * self.support:
                raise ValueError("table must span exactly [0, support]")
            if abs(vs[-1]) > 1e-12 or np.any(vs[:-1] <= 0):
                raise ValueError("table values must be positive before the front and zero at it")
            spline = CubicSpline(xs, vs, bc_type=((1, 0.0), "not-a-knot"))
            object.__setattr__(self, "_spline", spline)
            object.__setattr__(self, "amplitude", float(np.max(vs)))
        elif not self.amplitude > 0:
            raise ValueError("amplitude must be positive")

    @classmethod
    def cosine(cls, support: float, amplitude: float = 1.0) -> "InitialProfile":
        return cls("cosine", support, amplitude)

    @classmethod
    def bump(cls, support: float, amplitude: float = 1.0) -> "InitialProfile":
        return cls("bump", support, amplitude)

    @classmethod
    def tabulated(cls, xs: Sequence[float], values: Sequence[float]) -> "InitialProfile":
        xs = tuple(float(x) for x in xs)
        return cls("tabulated", xs[-1], 1.0, (xs, tuple(float(v) for v in values)))

    def value(self, x):
        x = np.asarray(x, dtype=float)
        s = self.support
        inside = (x >= 0) & (x < s)
        xc = np.clip(x, 0.0, s)
        if self.kind == "cosine":
            out = self.amplitude * np.cos(0.5 * np.pi * xc / s)
        elif self.kind == "bump":
            out = self.amplitude * (1.0 - (xc / s) ** 2) ** 2
        else:
            out = self._spline(xc)
        return np.where(inside, out, 0.0)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        s = self.support
        inside = (x >= 0) & (x <= s)
        xc = np.clip(x, 0.0, s)
        if self.kind == "cosine":
            out = -self.amplitude * 0.5 * np.pi / s * np.sin(0.5 * np.pi * xc / s)
        elif self.kind == "bump":
            out = -4.0 * self.amplitude * xc / s**2 * (1.0 - (xc / s) ** 2)
        else:
            out = self._spline(xc, 1)
        return np.where(inside, out, 0.0)

    def sup(self) -> float:
        if self.kind == "tabulated":
            xs = np.linspace(0.0, self.support, 20001)
            return float(np.max(self.value(xs)))
        return float(self.amplitude)

    def min_slope(self) -> float:
        """min of the derivative over [0, support] (a non-positive number)."""
        if self.kind == "cosine":
            return -self.amplitude * 0.5 * math.pi / self.support
        if self.kind == "bump":
            return -8.0 * self.amplitude / (3.0 * math.sqrt(3.0) * self.support)
        xs = np.linspace(0.0, self.support, 20001)
        return float(min(0.0, np.min(self.derivative(xs))))

    def with_support(self, support: float) -> "InitialProfile":
        if self.kind == "tabulated":
            xs = np.asarray(self.table[0]) * (support / self.support)
            return InitialProfile.tabulated(xs, self.table[1])
        return replace(self, support=support)


def _speed(radicand: float) -> Optional[float]:
    return 2.0 * math.sqrt(radicand) if radicand > 0 else None


@dataclass(frozen=True)
class DerivedConstants:
    M1: float
    M2: float
    K: float
    A: Optional[float]
    B: Optional[float]
    c1: float
    c2: float
    c3: Optional[float]
    c4: Optional[float]
    c5: Optional[float]
    prey_barrier: float
    pred_barrier: float
    prey_speed_bound: float
    pred_speed_bound: float


def derive_constants(params: ModelParams, u0: InitialProfile, v0: InitialProfile) -> DerivedConstants:
    """Closed-form constants of the model.

    Quantities whose defining radicand (or regime) is not positive are None.
    """
    a, b, c, d = params.a, params.b, params.c, params.d
    M1 = max(a, u0.sup())
    M2 = max(1.0 + c * M1, v0.sup())
    K = 2.0 * max(M2 * math.sqrt((1.0 + c * M1) / 2.0), -v0.min_slope())
    if params.weak_predation:
        A = (a - b) / (1.0 + b * c)
        B = (1.0 + a * c) / (1.0 + b * c)
    else:
        A = B = None
    prey_speed_bound = 2.0 * params.beta * max(M1 * math.sqrt(a / (2.0 * d)), -u0.min_slope())
    return DerivedConstants(
        M1=M1,
        M2=M2,
        K=K,
        A=A,
        B=B,
        c1=2.0 * math.sqrt(d * a),
        c2=2.0 * math.sqrt(1.0 + a * c),
        c3=_speed(d * a - d * b * (1.0 + a * c)),
        c4=_speed(d * a - d * b),
        c5=_speed((1.0 + a * c) * (1.0 - b * c)),
        prey_barrier=0.5 * math.pi * math.sqrt(d / a),
        pred_barrier=0.5 * math.pi * math.sqrt(1.0 / (1.0 + a * c)),
        prey_speed_bound=prey_speed_bound,
        pred_speed_bound=params.mu * K,
    )


def iterate_coexistence_bounds(params: ModelParams, n: int):
    """Upper/lower bound sequences that squeeze the coexistence state (A, B).

    Returns n tuples ``(u_hi, v_hi, u_lo, v_lo_next)``: the i-th upper prey
    bound, upper predator bound, lower prey bound, and the lower predator
    bound that seeds iteration i+1.
    """
    a, b, c = params.a, params.b, params.c
    if not (params.weak_predation and params.prey_sub_capacity > 0):
        raise RegimeError(
            f"coexistence iteration needs b < min(a, 1/c) and a > b(1+ac); got a={a}, b={b}, c={c}"
        )
    if n < 1:
        raise ValueError("n must be >= 1")
    v_lo = 1.0
    out = []
    for _ in range(n):
        u_hi = a - b * v_lo
        v_hi = 1.0 + c * u_hi
        u_lo = a - b * v_hi
        v_lo = 1.0 + c * u_lo
        out.append((u_hi, v_hi, u_lo, v_lo))
    return out
