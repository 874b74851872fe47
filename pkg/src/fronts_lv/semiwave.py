"""Semi-wave problem

    d q'' - k q' + q (theta - q) = 0 on (0, inf),  q(0) = 0,  q'(0) = k / nu,  q(inf) = theta,

solved in the phase plane (q, p = q').  The connection leaves the saddle
(theta, 0) along its stable direction; we integrate dp/dq backwards from
just below theta to q = 0 and root-find on F(k) = p(0; k) - k / nu.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import SemiWaveError
from .model import ModelParams

SCAN_POINTS = 32
MANIFOLD_OFFSET = 1e-6
PROFILE_TRUNCATION = 1e-6
PROFILE_SAMPLES = 400


@dataclass(frozen=True)
class SemiWave:
    k: float
    nu: float
    d: float
    theta: float
    y: np.ndarray
    q: np.ndarray

    @property
    def slope_at_zero(self) -> float:
        return self.k / self.nu


@dataclass(frozen=True)
class SpeedTable:
    kbar_beta: float
    kund_mu: float
    kbar_mu: float
    kund_beta: Optional[float]


def _manifold_slope(k, d, theta):
    return (-k + math.sqrt(k * k + 4.0 * d * theta)) / (2.0 * d)


def _integrate(k, d, theta, rtol, with_y=False):
    """Backward integration of the stable manifold of (theta, 0) down to q = 0."""
    delta = MANIFOLD_OFFSET * theta
    q_start = theta - delta
    p_start = _manifold_slope(k, d, theta) * delta

    if with_y:
        def rhs(q, s):
            p = s[0]
            return [(k * p - q * (theta - q)) / (d * p), 1.0 / p]
        s0 = [p_start, 0.0]
    else:
        def rhs(q, s):
            p = s[0]
            return [(k * p - q * (theta - q)) / (d * p)]
        s0 = [p_start]

    def hits_zero(q, s):
        return s[0]
    hits_zero.terminal = True

    sol = solve_ivp(rhs, (q_start, 0.0), s0, method="DOP853", rtol=rtol,
                    atol=1e-14 * max(theta, 1.0), events=hits_zero, dense_output=with_y)
    return sol


def _p_at_zero(k, d, theta, rtol):
    sol = _integrate(k, d, theta, rtol)
    if sol.status == 1:
        # orbit fell onto p = 0 before reaching q = 0: speed too large
        return -float(sol.t_events[0][0])
    return float(sol.y[0, -1])


def solve_semiwave(nu: float, d: float, theta: float, tol: float = 1e-8) -> SemiWave:
    if not (nu > 0 and d > 0 and theta > 0):
        raise ValueError("nu, d, theta must be positive")
    if not (1e-12 < tol < 1e-2):
        raise ValueError("tol must lie in (1e-12, 1e-2)")
    rtol = max(tol / 10.0, 1e-13)
    kmax = 2.0 * math.sqrt(theta * d)
    eps = 1e-8 * math.sqrt(theta * d)

    def F(k):
        return _p_at_zero(k, d, theta, rtol) - k / nu

    ks = np.geomspace(eps, kmax - eps, SCAN_POINTS)
    scan = []
    lo = hi = None
    f_prev = None
    for k in ks:
        f = F(float(k))
        scan.append((float(k), f))
        if f_prev is not None and f_prev > 0 >= f:
            lo, hi = scan[-2][0], float(k)
            break
        f_prev = f
    if lo is None:
        raise SemiWaveError(f"no sign change of F(k) on (0, {kmax:.6g}) for nu={nu}, d={d}, theta={theta}", scan)

    k = brentq(F, lo, hi, xtol=tol * lo * 1e-2, rtol=max(tol * 1e-2, 4.5e-16))

    sol = _integrate(k, d, theta, rtol, with_y=True)
    # uniform in q on the lower half, geometric towards theta where y(q) grows logarithmically
    half = PROFILE_SAMPLES // 4
    gap = np.geomspace(0.5, PROFILE_TRUNCATION, PROFILE_SAMPLES - half)
    qs = theta * np.concatenate([np.linspace(0.0, 0.5, half, endpoint=False), 1.0 - gap])
    ys = sol.sol(qs)[1]
    ys = ys - ys[0]
    return SemiWave(k=k, nu=nu, d=d, theta=theta, y=ys, q=qs)


@lru_cache(maxsize=4096)
def _kappa_cached(nu, d, theta, tol):
    return solve_semiwave(nu, d, theta, tol).k


def kappa(nu: float, d: float, theta: float, tol: float = 1e-8) -> float:
    """Semi-wave speed k(nu, d, theta)."""
    return _kappa_cached(float(nu), float(d), float(theta), float(tol))


def speed_table(params: ModelParams, tol: float = 1e-8) -> SpeedTable:
    a, b, c, d = params.a, params.b, params.c, params.d
    kbar_beta = kappa(params.beta, d, a, tol)
    kund_mu = kappa(params.mu, 1.0, 1.0, tol)
    kbar_mu = kappa(params.mu, 1.0, 1.0 + a * c, tol)
    theta_low = a - b * (1.0 + a * c)
    kund_beta = kappa(params.beta, d, theta_low, tol) if theta_low > 0 else None
    if kund_mu > kbar_mu * (1 + 1e-9) or (kund_beta is not None and kund_beta > kbar_beta * (1 + 1e-9)):
        raise SemiWaveError("speed table violates monotonicity in theta")
    return SpeedTable(kbar_beta=kbar_beta, kund_mu=kund_mu, kbar_mu=kbar_mu, kund_beta=kund_beta)
