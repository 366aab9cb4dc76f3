"""Two-type continuum model of scarce-treatment allocation.

A unit mass of patients splits into a vulnerable share ``alpha`` with
baseline survival ``L`` and a share ``1 - alpha`` with baseline survival
``H``; treatment multiplies survival by ``gamma`` > 1, and a mass
``k`` < 1 of treatment slots is available. A policy chooses treated
fractions per type and induces a survival profile whose welfare, under a
contamination fan with aversion profile ``rho``, depends only on the
profile's (mean, worst-off) pair: it is the unique self-consistent level

    v = (1 - rho(v)) * mean + rho(v) * worst.

Two benchmark policies bracket everything: the efficient policy treats
high-survival patients first (largest marginal gain), the fair policy
treats vulnerable patients first (worst-off). For every supply level k
there is a vulnerability threshold below which the fair policy wins and
above which the efficient one does; past ``alpha > k`` the efficient
policy wins for all parameter values (the crisis region).

Grid sweeps over (k, alpha) are embarrassingly parallel; every cell is an
independent pure computation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    InfeasiblePolicyError,
    MonotoneFunction,
    UtilityVector,
)

__all__ = [
    "TriageParams",
    "ScenarioParams",
    "TwoTypePolicy",
    "worst_case_welfare",
    "consistent_welfare",
    "policy_outcomes",
    "efficient_policy",
    "fair_policy",
    "efficient_mean",
    "fair_mean",
    "efficient_welfare",
    "fair_welfare",
    "optimal_policy_threshold",
    "classify_scenario",
    "GridCell",
    "policy_region_grid",
    "write_region_csv",
    "check_policy_dominated",
    "discretize_policy",
    "load_triage_params",
]

_MASS_EPS = 1e-12  # a utility level counts only when carried by positive mass
_FEAS_EPS = 1e-12


@dataclass(frozen=True)
class TriageParams:
    """Model primitives: baseline survivals, treatment gain, aversion profile."""

    L: float
    H: float
    gamma: float
    rho: MonotoneFunction = MonotoneFunction.identity()

    def __post_init__(self):
        if not 0.0 < self.L < self.H:
            raise DomainError("need 0 < L < H")
        if not self.gamma > 1.0:
            raise DomainError("treatment multiplier gamma must exceed 1")
        top = self.gamma * self.H
        if top > 1.0 + 1e-12:
            raise DomainError("gamma * H must not exceed 1 (survival probabilities)")
        if abs(top - 1.0) <= 1e-12:
            warnings.warn(
                "gamma * H equals 1: treated high-type survival sits on the "
                "boundary; welfare stays defined because any feasible policy "
                "(k < 1) leaves untreated mass, keeping the mean below 1",
                stacklevel=2,
            )

    @property
    def fair_floor(self) -> float:
        """Worst-off survival once every vulnerable patient is treated."""
        return min(self.gamma * self.L, self.H)


@dataclass(frozen=True)
class ScenarioParams:
    """Treatment supply k and vulnerable share alpha, both strictly in (0, 1)."""

    k: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.k < 1.0:
            raise DomainError("treatment supply k must lie strictly inside (0, 1)")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("vulnerable share alpha must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class TwoTypePolicy:
    """Treated fractions per type; feasibility is checked against a scenario."""

    t_L: float
    t_H: float

    def __post_init__(self):
        if not 0.0 <= self.t_L <= 1.0 or not 0.0 <= self.t_H <= 1.0:
            raise DomainError("treated fractions must lie in [0, 1]")

    def used_capacity(self, s: ScenarioParams) -> float:
        return s.alpha * self.t_L + (1.0 - s.alpha) * self.t_H


def worst_case_welfare(v: float, mean: float, worst: float,
                       rho: MonotoneFunction) -> float:
    """Worst-case weighted welfare at level ``v`` for a (mean, worst) pair.

    Defined on 0 < worst <= mean < 1 with v in [0, 1]; the value
    interpolates between the mean (no aversion) and the worst-off utility
    (full aversion).
    """
    if not (0.0 < worst <= mean < 1.0):
        raise DomainError(
            f"(mean, worst) must satisfy 0 < worst <= mean < 1, got ({mean!r}, {worst!r})"
        )
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"level must lie in [0, 1], got {v!r}")
    a = rho(v)
    return (1.0 - a) * mean + a * worst


def consistent_welfare(mean: float, worst: float, rho: MonotoneFunction,
                       tol: float = 1e-12) -> float:
    """The unique level equal to its own worst-case weighted welfare.

    The gap g(v) = worst_case_welfare(v) - v is strictly decreasing with
    g(0) = mean > 0 and g(1) = worst - 1 < 0, so bisection on [0, 1]
    converges to the unique root; iteration stops once |g| <= tol.
    """
    if not (0.0 < worst <= mean < 1.0):
        raise DomainError(
            f"(mean, worst) must satisfy 0 < worst <= mean < 1, got ({mean!r}, {worst!r})"
        )
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        a = rho(mid)
        gap = (1.0 - a) * mean + a * worst - mid
        if abs(gap) <= tol:
            return mid
        if gap > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def policy_outcomes(p: TriageParams, s: ScenarioParams,
                    pol: TwoTypePolicy) -> tuple[float, float]:
    """Mean and worst-off survival induced by a feasible policy.

    The worst-off value is the smallest survival level carried by strictly
    positive mass (essential-infimum semantics: fully treated groups leave
    no untreated mass behind).
    """
    if pol.used_capacity(s) > s.k + _FEAS_EPS:
        raise InfeasiblePolicyError(
            f"policy uses capacity {pol.used_capacity(s)!r} > k={s.k!r}"
        )
    groups = [
        (s.alpha * (1.0 - pol.t_L), p.L),
        (s.alpha * pol.t_L, p.gamma * p.L),
        ((1.0 - s.alpha) * (1.0 - pol.t_H), p.H),
        ((1.0 - s.alpha) * pol.t_H, p.gamma * p.H),
    ]
    mean = sum(mass * level for mass, level in groups)
    worst = min(level for mass, level in groups if mass > _MASS_EPS)
    return mean, worst


def efficient_policy(s: ScenarioParams, p: TriageParams) -> TwoTypePolicy:
    """Treat as many high-survival patients as possible, then the rest."""
    t_H = min(1.0, s.k / (1.0 - s.alpha))
    spare = s.k - (1.0 - s.alpha) * t_H
    t_L = min(1.0, max(0.0, spare) / s.alpha)
    return TwoTypePolicy(t_L=t_L, t_H=t_H)


def fair_policy(s: ScenarioParams, p: TriageParams) -> TwoTypePolicy:
    """Treat as many vulnerable patients as possible, then the rest."""
    t_L = min(1.0, s.k / s.alpha)
    spare = s.k - s.alpha * t_L
    t_H = min(1.0, max(0.0, spare) / (1.0 - s.alpha))
    return TwoTypePolicy(t_L=t_L, t_H=t_H)


def efficient_mean(k: float, alpha: float, p: TriageParams) -> float:
    """Mean survival under the efficient policy, in closed form.

    Baseline alpha*L + (1-alpha)*H, plus (gamma-1)*k*H as if all slots went
    to high types, corrected by (gamma-1)*(H-L)*min(1-alpha-k, 0) for the
    slots that overflow onto vulnerable patients. Valid on all of (0, 1)^2.
    """
    s = ScenarioParams(k=k, alpha=alpha)
    value = (alpha * p.L + (1.0 - alpha) * p.H
             + (p.gamma - 1.0) * k * p.H
             + (p.gamma - 1.0) * (p.H - p.L) * min(1.0 - alpha - k, 0.0))
    check, _ = policy_outcomes(p, s, efficient_policy(s, p))
    assert abs(check - value) <= 1e-9, "closed form diverged from policy arithmetic"
    return value


def fair_mean(k: float, alpha: float, p: TriageParams) -> float:
    """Mean survival under the fair policy when every vulnerable patient fits.

    Requires alpha <= k: baseline plus (gamma-1)*alpha*L for treating all
    vulnerable patients plus (gamma-1)*(k-alpha)*H for the leftover slots.
    """
    s = ScenarioParams(k=k, alpha=alpha)
    if alpha > k:
        raise DomainError("fair_mean requires alpha <= k (all vulnerable treated)")
    value = (alpha * p.L + (1.0 - alpha) * p.H
             + (p.gamma - 1.0) * alpha * p.L
             + (p.gamma - 1.0) * (k - alpha) * p.H)
    check, _ = policy_outcomes(p, s, fair_policy(s, p))
    assert abs(check - value) <= 1e-9, "closed form diverged from policy arithmetic"
    return value


def efficient_welfare(k: float, alpha: float, p: TriageParams,
                      tol: float = 1e-12) -> float:
    """Welfare of the efficient policy (worst-off survival is always L)."""
    return consistent_welfare(efficient_mean(k, alpha, p), p.L, p.rho, tol)


def fair_welfare(k: float, alpha: float, p: TriageParams,
                 tol: float = 1e-12) -> float:
    """Welfare of the fair policy on alpha <= k, where its floor is min(gamma*L, H)."""
    return consistent_welfare(fair_mean(k, alpha, p), p.fair_floor, p.rho, tol)


def optimal_policy_threshold(k: float, p: TriageParams, tol: float = 1e-9) -> float:
    """Vulnerability share where the optimal policy flips from fair to efficient.

    On alpha <= k the welfare gap (efficient minus fair) crosses zero at
    most once and from below, so a sign check at the bracket ends either
    yields the trivial answer (fair wins everywhere, threshold k) or a
    bisection target. Returned to absolute accuracy ``tol`` in alpha.
    """
    if not 0.0 < k < 1.0:
        raise DomainError("k must lie strictly inside (0, 1)")
    eps = 1e-6
    if k <= 2.0 * eps:
        return k

    def gap(alpha: float) -> float:
        return efficient_welfare(k, alpha, p) - fair_welfare(k, alpha, p)

    if gap(k - eps) <= 0.0:
        return k
    lo, hi = eps, k - eps
    if gap(lo) >= 0.0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify_scenario(k: float, alpha: float, p: TriageParams,
                      tol: float = 1e-9) -> str:
    """Which benchmark policy is optimal at (k, alpha).

    ``crisis_efficient`` when alpha >= k (not all vulnerable patients can be
    treated; efficiency wins for every parameter choice; the boundary
    alpha = k is assigned here by convention), otherwise ``efficient_optimal``
    or ``fair_optimal`` by comparison with the threshold. Exactly at the
    threshold the tie goes to ``efficient_optimal``.
    """
    ScenarioParams(k=k, alpha=alpha)
    if alpha >= k:
        return "crisis_efficient"
    threshold = optimal_policy_threshold(k, p, tol)
    return "efficient_optimal" if alpha >= threshold else "fair_optimal"


@dataclass(frozen=True)
class GridCell:
    """One (k, alpha) cell: both policy welfare values and the optimal region."""

    k: float
    alpha: float
    v_efficient: float
    v_fair: float
    region: str


def policy_region_grid(k_range: tuple[float, float], alpha_range: tuple[float, float],
                       steps: int, p: TriageParams, tol: float = 1e-9) -> list[GridCell]:
    """Sweep a steps-by-steps grid and tabulate both welfare values per cell.

    Welfare values come from the actual benchmark policies (so they are
    defined on both sides of the alpha = k diagonal) and the region label
    from :func:`classify_scenario`. Rows are ordered k-major to keep CSV
    output deterministic.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    for lo, hi in (k_range, alpha_range):
        if not (0.0 < lo < hi < 1.0):
            raise DomainError("grid ranges must satisfy 0 < low < high < 1")
    ks = np.linspace(k_range[0], k_range[1], steps)
    alphas = np.linspace(alpha_range[0], alpha_range[1], steps)
    cells = []
    for k in ks:
        k = float(k)
        threshold = optimal_policy_threshold(k, p, tol)
        for alpha in alphas:
            alpha = float(alpha)
            s = ScenarioParams(k=k, alpha=alpha)
            mean_e, worst_e = policy_outcomes(p, s, efficient_policy(s, p))
            mean_f, worst_f = policy_outcomes(p, s, fair_policy(s, p))
            v_e = consistent_welfare(mean_e, worst_e, p.rho)
            v_f = consistent_welfare(mean_f, worst_f, p.rho)
            if alpha >= k:
                region = "crisis_efficient"
            elif alpha >= threshold:
                region = "efficient_optimal"
            else:
                region = "fair_optimal"
            cells.append(GridCell(k, alpha, v_e, v_f, region))
    return cells


def write_region_csv(cells, stream) -> None:
    """CSV with columns k, alpha, v_efficient, v_fair, region (12 significant digits)."""
    stream.write("k,alpha,v_efficient,v_fair,region\n")
    for c in cells:
        stream.write(
            f"{c.k:.12g},{c.alpha:.12g},{c.v_efficient:.12g},{c.v_fair:.12g},{c.region}\n"
        )


def check_policy_dominated(p: TriageParams, s: ScenarioParams, pol: TwoTypePolicy,
                           tol: float = 1e-9) -> bool:
    """True when the policy's welfare is at most the best benchmark welfare."""
    mean, worst = policy_outcomes(p, s, pol)
    value = consistent_welfare(mean, worst, p.rho)
    mean_e, worst_e = policy_outcomes(p, s, efficient_policy(s, p))
    mean_f, worst_f = policy_outcomes(p, s, fair_policy(s, p))
    best = max(consistent_welfare(mean_e, worst_e, p.rho),
               consistent_welfare(mean_f, worst_f, p.rho))
    return value <= best + tol


def discretize_policy(p: TriageParams, s: ScenarioParams, pol: TwoTypePolicy,
                      n: int) -> UtilityVector:
    """A finite survival profile approximating the continuum policy.

    Group sizes are rounded to integers, so masses are matched to O(1/n);
    useful for bridging the continuum model to the finite-profile solver.
    """
    if n < 2:
        raise DomainError("need at least two agents")
    n_low = round(s.alpha * n)
    n_high = n - n_low
    treated_low = round(pol.t_L * n_low)
    treated_high = round(pol.t_H * n_high)
    values = np.concatenate([
        np.full(treated_low, p.gamma * p.L),
        np.full(n_low - treated_low, p.L),
        np.full(treated_high, p.gamma * p.H),
        np.full(n_high - treated_high, p.H),
    ])
    return UtilityVector(values)


def load_triage_params(data: dict) -> TriageParams:
    """Build :class:`TriageParams` from the JSON scenario-config schema.

    Accepts the full document ``{"L":, "H":, "gamma":, "rho": {...}, "k":,
    "alpha":}``; the scenario fields are ignored here.
    """
    rho = data.get("rho")
    return TriageParams(
        L=float(data["L"]),
        H=float(data["H"]),
        gamma=float(data["gamma"]),
        rho=MonotoneFunction.from_dict(rho) if rho else MonotoneFunction.identity(),
    )
