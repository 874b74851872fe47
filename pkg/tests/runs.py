"""Expensive simulations shared between test modules (computed once per session)."""
import math
from functools import lru_cache

from fronts_lv import InitialProfile, ModelParams, SolverConfig, critical_gamma, simulate, solve_logistic

WEAK = ModelParams(a=2.0, b=0.5, c=0.5, d=1.0, beta=10.0, mu=10.0, g0=3.0, h0=2.0)
STRONG = ModelParams(a=1.0, b=3.0, c=0.5, d=1.0, beta=10.0, mu=10.0, g0=2.0, h0=2.0)


def cosine_pair(params, amp_u=1.0, amp_v=1.0):
    return InitialProfile.cosine(params.g0, amp_u), InitialProfile.cosine(params.h0, amp_v)


@lru_cache(maxsize=None)
def weak_long_run():
    """Coexistence run at the default resolution, with snapshots for the moving-frame check."""
    u0, v0 = cosine_pair(WEAK)
    cfg = SolverConfig(ny=400, nxi=400, t_max=200.0, record_dt=0.5, snapshot_dt=5.0, snapshot_nx=801)
    return simulate(WEAK, u0, v0, cfg)


@lru_cache(maxsize=None)
def weak_medium_run():
    u0, v0 = cosine_pair(WEAK)
    cfg = SolverConfig(ny=200, nxi=200, t_max=30.0, record_dt=0.5)
    return cfg, simulate(WEAK, u0, v0, cfg)


@lru_cache(maxsize=None)
def strong_run():
    u0, v0 = cosine_pair(STRONG)
    cfg = SolverConfig(ny=200, nxi=200, t_max=100.0, record_dt=0.5)
    return simulate(STRONG, u0, v0, cfg)


@lru_cache(maxsize=None)
def logistic_spreading_run(gamma=5.0, n=400, t_max=100.0):
    z0 = InitialProfile.cosine(2.0, 1.0)
    cfg = SolverConfig(ny=n, t_max=t_max, record_dt=0.5)
    return solve_logistic(1.0, 1.0, gamma, 2.0, z0, cfg)


SCALAR_RHO0 = 0.8
SCALAR_Z0 = InitialProfile.cosine(SCALAR_RHO0, 0.5)


@lru_cache(maxsize=None)
def scalar_threshold(theta=1.0):
    return critical_gamma(1.0, theta, SCALAR_RHO0, SCALAR_Z0)


# predator-vanishing setup: small predator habitat, predator front at half the lower threshold
THM_A, THM_B, THM_C, THM_D = 1.0, 0.5, 0.5, 1.0
THM_H0 = 0.5 * 0.5 * math.pi * math.sqrt(1.0 / (1.0 + THM_A * THM_C))


@lru_cache(maxsize=None)
def predator_lower_threshold():
    v0 = InitialProfile.cosine(THM_H0, 1.0)
    return critical_gamma(1.0, 1.0 + THM_A * THM_C, THM_H0, v0)


def predator_vanishing_params(g0):
    mu = 0.5 * predator_lower_threshold().value
    return ModelParams(a=THM_A, b=THM_B, c=THM_C, d=THM_D, beta=10.0, mu=mu, g0=g0, h0=THM_H0)


SEPARATION = ModelParams(a=1.0, b=0.5, c=0.5, d=1.0, beta=1.0, mu=0.01, g0=5.5, h0=0.5)


@lru_cache(maxsize=None)
def separation_run():
    u0, v0 = cosine_pair(SEPARATION)
    cfg = SolverConfig(ny=200, nxi=200, t_max=60.0, record_dt=0.5)
    return cfg, simulate(SEPARATION, u0, v0, cfg)
