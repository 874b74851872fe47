"""Critical moving parameters by bisection over scalar outcomes, and the
sufficient spreading / vanishing criteria for the coupled system."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import InconclusiveThreshold, RegimeError
from .logistic_fb import Classification, solve_logistic
from .model import InitialProfile, ModelParams, derive_constants
from .scheme import DetectConfig, SolverConfig
from .semiwave import kappa

# scalar runs used as the bisection oracle: coarser than the default solver grid
THRESHOLD_SOLVER = SolverConfig(ny=200, nxi=200, dt=1e-2, t_max=100.0, record_dt=0.1)
BRACKET_START = 1.0
BRACKET_FACTOR = 4.0
BRACKET_CAP = 12
MAX_RETRIES = 3
DELTA_SAMPLES = 10_000


@dataclass
class GammaThreshold:
    """Critical gamma.  ``spreads_for_all`` marks the case where the initial
    habitat already exceeds the barrier; value and bracket are then None."""

    value: Optional[float]
    bracket: Optional[tuple]
    runs: int
    spreads_for_all: bool = False
    flagged: bool = False
    notes: list = field(default_factory=list)

    def spreads(self, gamma: float) -> bool:
        """Predicted outcome for a given gamma (gamma <= threshold vanishes)."""
        return self.spreads_for_all or gamma > self.value

    def to_dict(self):
        out = asdict(self)
        out["bracket"] = list(self.bracket) if self.bracket else None
        return out


def barrier(d: float, theta: float) -> float:
    return 0.5 * math.pi * math.sqrt(d / theta)


class _Oracle:
    """Memoized scalar classification with the retry-then-pessimistic policy for undecided runs."""

    def __init__(self, d, theta, rho0, z0, cfg, detect):
        self.args = (d, theta, rho0, z0)
        self.cfg = cfg
        self.detect = detect
        self.runs = 0
        self.flagged = False
        self.notes = []
        self.cache = {}

    def __call__(self, gamma: float) -> Classification:
        if gamma in self.cache:
            return self.cache[gamma]
        d, theta, rho0, z0 = self.args
        t_max = self.cfg.t_max
        verdict = Classification.UNDECIDED
        for _ in range(MAX_RETRIES + 1):
            cfg = _with_t_max(self.cfg, t_max)
            verdict = solve_logistic(d, theta, gamma, rho0, z0, cfg, self.detect).classification
            self.runs += 1
            if verdict != Classification.UNDECIDED or t_max >= self.detect.t_cap:
                break
            t_max = min(2.0 * t_max, self.detect.t_cap)
        if verdict == Classification.UNDECIDED:
            self.flagged = True
            self.notes.append(f"gamma={gamma:.6g} undecided at t_max={t_max:.6g}; counted as vanishing")
            verdict = Classification.VANISHING
        self.cache[gamma] = verdict
        return verdict


def _with_t_max(cfg: SolverConfig, t_max: float) -> SolverConfig:
    return replace(cfg, t_max=t_max, stop_on_decision=True)


def critical_gamma(d: float, theta: float, rho0: float, z0: InitialProfile, tol: float = 1e-2,
                   cfg: SolverConfig | None = None, detect: DetectConfig | None = None) -> GammaThreshold:
    """Sharp gamma separating vanishing (gamma <= value) from spreading, to relative tolerance ``tol``."""
    for name, value in (("d", d), ("theta", theta), ("rho0", rho0), ("tol", tol)):
        if not value > 0:
            raise ValueError(f"{name} must be positive")
    if rho0 >= barrier(d, theta):
        return GammaThreshold(None, None, 0, spreads_for_all=True)
    if abs(z0.support - rho0) > 1e-12 * rho0:
        z0 = z0.with_support(rho0)
    oracle = _Oracle(d, theta, rho0, z0, cfg or THRESHOLD_SOLVER, detect or DetectConfig())

    gamma = BRACKET_START
    spreading = oracle(gamma) == Classification.SPREADING
    lo = hi = None
    for _ in range(BRACKET_CAP):
        if spreading:
            hi = gamma
            gamma /= BRACKET_FACTOR
        else:
            lo = gamma
            gamma *= BRACKET_FACTOR
        spreading = oracle(gamma) == Classification.SPREADING
        if spreading and lo is not None:
            hi = gamma
            break
        if not spreading and hi is not None:
            lo = gamma
            break
    if lo is None or hi is None:
        raise InconclusiveThreshold(
            f"no sign change within {BRACKET_CAP} factor-{BRACKET_FACTOR:g} steps from gamma={BRACKET_START}",
            (lo, hi))

    # bisection in log(gamma): thresholds span decades
    while hi / lo - 1.0 > tol:
        mid = math.sqrt(lo * hi)
        if oracle(mid) == Classification.SPREADING:
            hi = mid
        else:
            lo = mid
    return GammaThreshold(value=math.sqrt(lo * hi), bracket=(lo, hi), runs=oracle.runs,
                          flagged=oracle.flagged, notes=oracle.notes)


def named_thresholds(params: ModelParams, u0: InitialProfile, v0: InitialProfile, tol: float = 1e-2,
                     cfg: SolverConfig | None = None, detect: DetectConfig | None = None):
    """(beta*, mu*, mu_*): critical gammas of the prey alone at capacity a, and of the
    predator alone at capacities 1 and 1 + ac."""
    a, c, d = params.a, params.c, params.d
    beta_star = critical_gamma(d, a, params.g0, u0, tol, cfg, detect)
    mu_upper = critical_gamma(1.0, 1.0, params.h0, v0, tol, cfg, detect)
    mu_lower = critical_gamma(1.0, 1.0 + a * c, params.h0, v0, tol, cfg, detect)
    return beta_star, mu_upper, mu_lower


# ----------------------------------------------------------------- criteria

def _gamma_relation(gamma: float, thr: GammaThreshold) -> str:
    """'above', 'below' or 'inside' (inside the final bisection bracket)."""
    if thr.spreads_for_all:
        return "above"
    lo, hi = thr.bracket
    if gamma >= hi:
        return "above"
    if gamma <= lo:
        return "below"
    return "inside"


_VERDICT_WORDS = {"yes": "satisfied", "no": "not satisfied", "not-applicable": "not applicable",
                  "inconclusive": "inconclusive"}


def _entry(theorem, hypotheses, satisfied, prediction):
    summary = f"Thm{theorem}: {_VERDICT_WORDS[satisfied]}"
    if satisfied == "yes":
        summary += f", predicts {prediction}"
    return {"theorem": theorem, "hypotheses": hypotheses, "satisfied": satisfied, "prediction": prediction,
            "summary": summary}


@dataclass
class CriteriaReport:
    entries: list
    thresholds: dict

    def by_theorem(self, theorem: str) -> dict:
        for entry in self.entries:
            if entry["theorem"] == theorem:
                return entry
        raise KeyError(theorem)

    def to_dict(self):
        return {"entries": self.entries, "thresholds": self.thresholds}


def check_criteria(params: ModelParams, u0: InitialProfile, v0: InitialProfile, tol: float = 1e-2,
                   cfg: SolverConfig | None = None, detect: DetectConfig | None = None,
                   thresholds=None) -> CriteriaReport:
    """Evaluate every sufficient criterion; ``satisfied`` is "yes", "no", "not-applicable" or
    "inconclusive" (the parameter sits inside a threshold's bisection bracket)."""
    a, b, c, d = params.a, params.b, params.c, params.d
    beta, mu, g0, h0 = params.beta, params.mu, params.g0, params.h0
    u0 = u0.with_support(g0) if abs(u0.support - g0) > 1e-12 * g0 else u0
    v0 = v0.with_support(h0) if abs(v0.support - h0) > 1e-12 * h0 else v0
    beta_star, mu_upper, mu_lower = thresholds or named_thresholds(params, u0, v0, tol, cfg, detect)

    prey_free_barrier = barrier(d, a)
    pred_barrier = 0.5 * math.pi
    pred_low_barrier = barrier(1.0, 1.0 + a * c)
    u0_below_a = u0.sup() <= a
    entries = []

    # prey vanishes: small habitat and slow front
    rel = _gamma_relation(beta, beta_star)
    hyp = {"g0": g0, "prey_barrier": prey_free_barrier, "beta": beta, "beta_star": beta_star.value}
    if g0 >= prey_free_barrier:
        sat = "no"
    else:
        sat = {"below": "yes", "above": "no", "inside": "inconclusive"}[rel]
    entries.append(_entry("5.1(i)", hyp, sat, "g_inf finite"))

    # predator spreads: large habitat or fast front
    rel = _gamma_relation(mu, mu_upper)
    hyp = {"h0": h0, "predator_barrier": pred_barrier, "mu": mu, "mu_upper": mu_upper.value}
    if h0 >= pred_barrier:
        sat = "yes"
    else:
        sat = {"above": "yes", "below": "no", "inside": "inconclusive"}[rel]
    entries.append(_entry("5.1(ii)", hyp, sat, "h_inf infinite"))

    # predator vanishes even with the prey at capacity
    rel = _gamma_relation(mu, mu_lower)
    hyp = {"u0_sup": u0.sup(), "a": a, "h0": h0, "predator_barrier_low": pred_low_barrier,
           "mu": mu, "mu_lower": mu_lower.value}
    if not u0_below_a or h0 >= pred_low_barrier:
        pred_vanish = "no"
    else:
        pred_vanish = {"below": "yes", "above": "no", "inside": "inconclusive"}[rel]
    entries.append(_entry("5.1(iii)", hyp, pred_vanish, "h_inf finite"))

    # prey spreads once the predator is known to vanish
    rel = _gamma_relation(beta, beta_star)
    hyp = {"predator_vanishes": pred_vanish, "g0": g0, "prey_barrier": prey_free_barrier,
           "beta": beta, "beta_star": beta_star.value}
    if pred_vanish != "yes":
        sat = pred_vanish if pred_vanish == "inconclusive" else "no"
    elif g0 > prey_free_barrier:
        sat = "yes"
    elif g0 < prey_free_barrier:
        sat = {"above": "yes", "below": "no", "inside": "inconclusive"}[rel]
    else:
        sat = "no"
    entries.append(_entry("5.2", hyp, sat, "g_inf infinite and h_inf finite"))

    # strong predation with a faster predator front
    k_prey = kappa(beta, d, a)
    k_pred = kappa(mu, 1.0, 1.0)
    in_set = k_prey < k_pred
    hyp = {"b": b, "a": a, "k_prey": k_prey, "k_predator": k_pred, "in_set_A": in_set}
    entries.append(_entry("5.3", hyp, "yes" if (in_set and b > a) else "no",
                          "g_inf finite if h_inf is infinite (conditional)"))

    sep = separation_condition(params, u0, v0)
    hyp = {key: sep[key] for key in ("K", "sigma", "L_sigma", "delta_sigma")}
    if not sep["applicable"]:
        sat = "not-applicable"
    else:
        ok = sep["condition_5_3_satisfied"] and sep["condition_below_sigma"] and sep["g0_h0_gap_ok"]
        sat = "yes" if ok else "no"
    entries.append(_entry("5.4", hyp, sat, "g(t) >= K mu t + h0 + L_sigma for all t, so g > h and g_inf infinite"))

    report = {"beta_star": beta_star.to_dict(), "mu_upper": mu_upper.to_dict(), "mu_lower": mu_lower.to_dict()}
    return CriteriaReport(entries, report)


# ------------------------------------------------------------ separation

def _interior(length: float, n: int) -> np.ndarray:
    """n uniform samples on [0, length] with one sample dropped at each end."""
    return np.linspace(0.0, length, n + 1)[1:-1]


def _delta(u0: InitialProfile, h0: float, sigma: float, L: float, d: float, a: float, n: int) -> float:
    y = _interior(L, n)
    phi = np.exp(-sigma * y / (2.0 * d)) * np.sin(math.pi * y / L)
    return float(min(np.min(u0.value(y + h0) / phi), 0.5 * a * np.min(1.0 / phi)))


def eigen_length(sigma: float, d: float, a: float, lam: float) -> float:
    """Length L with principal eigenvalue lam for -d phi'' - sigma phi' - a phi on (0, L), Dirichlet ends."""
    disc = 4.0 * d * (a + lam) - sigma * sigma
    if disc <= 0:
        raise RegimeError("no eigen-length: 4d(a + lambda) <= sigma^2")
    return math.pi * 2.0 * d / math.sqrt(disc)


def separation_condition(params: ModelParams, u0: InitialProfile, v0: InitialProfile) -> dict:
    """Constructive test that the prey front outruns the linear ceiling K mu t + h0 of the predator front."""
    a, d = params.a, params.d
    u0 = u0.with_support(params.g0) if abs(u0.support - params.g0) > 1e-12 * params.g0 else u0
    v0 = v0.with_support(params.h0) if abs(v0.support - params.h0) > 1e-12 * params.h0 else v0
    K = derive_constants(params, u0, v0).K
    sigma = K * params.mu
    out = {"K": K, "sigma": sigma, "sigma_max": math.sqrt(2.0 * d * a), "L_sigma": None, "delta_sigma": None,
           "separation_rhs": None, "condition_5_3_satisfied": False, "condition_below_sigma": False,
           "g0_h0_gap_ok": False, "applicable": False}
    if sigma >= math.sqrt(2.0 * d * a):
        out["reason"] = "sigma = K mu >= sqrt(2 d a)"
        return out
    L = _length(sigma, d, a)
    # same length from the eigenrelation at lambda = -a/2
    L_eig = eigen_length(sigma, d, a, -0.5 * a)
    assert math.isclose(L, L_eig, rel_tol=1e-12), (L, L_eig)
    gap_ok = params.g0 - params.h0 > L
    delta = _delta(u0, params.h0, sigma, L, d, a, DELTA_SAMPLES)
    delta_fine = _delta(u0, params.h0, sigma, L, d, a, 4 * DELTA_SAMPLES)
    rhs = _rhs(params.beta, delta_fine, sigma, L, d)
    # the construction needs the inequality on the whole of (0, sigma], not only at sigma
    below = all(s < _rhs(params.beta, _delta(u0, params.h0, s, _length(s, d, a), d, a, DELTA_SAMPLES),
                         s, _length(s, d, a), d)
                for s in sigma * np.linspace(0.0, 1.0, 17)[1:-1])
    out.update(L_sigma=L, delta_sigma=delta_fine, delta_sigma_coarse=delta, separation_rhs=rhs,
               condition_5_3_satisfied=bool(sigma < rhs), condition_below_sigma=bool(below),
               g0_h0_gap_ok=bool(gap_ok), applicable=True)
    return out


def _length(sigma, d, a):
    return 2.0 * d * math.pi / math.sqrt(2.0 * d * a - sigma * sigma)


def _rhs(beta, delta, sigma, L, d):
    return beta * delta * math.pi / L * math.exp(-sigma * L / (2.0 * d))
