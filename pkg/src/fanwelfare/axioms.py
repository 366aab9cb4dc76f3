"""Sampled falsification checks for welfare-ordering axioms.

Each checker hammers one axiom with seeded random trials and reports the
violation count together with the worst offending inputs. Checks are
falsification attempts, not proofs: zero violations is evidence, not a
certificate. A trial only counts as a violation when the margin exceeds ten
times the solver tolerance, so fixed-point noise cannot produce false
positives.

Continuity is deliberately absent. Sampled checks cannot tell the two
continuity notions used for increasing versus decreasing fans apart, and
both would trivially "pass" at any finite sample; the discontinuity that
actually matters (a step fan's open upper contour at its threshold) is
pinned down by a targeted regression test instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MaxIterExceededError, NotApplicableError, UtilityVector
from .fans import Fan, VertexTableFan
from .solver import DEFAULT_CONFIG, SolverConfig, welfare

__all__ = [
    "AxiomReport",
    "box_sampler",
    "check_monotonicity",
    "check_inada",
    "check_convexity",
    "check_mixing_invariance",
    "check_homotheticity",
    "run_axiom_battery",
]


@dataclass
class AxiomReport:
    """Outcome of one axiom checker: counts plus the worst offense seen."""

    axiom: str
    trials: int
    violations: int
    worst_case: dict | None = None
    applicable: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "trials": self.trials,
            "violations": self.violations,
            "worst_case": self.worst_case,
            "applicable": self.applicable,
            "note": self.note,
        }


def box_sampler(dims=(2, 3, 5), scale: float = 1.0):
    """Profiles drawn uniformly from (0, scale]^n with n picked from ``dims``."""
    dims = tuple(int(n) for n in dims)

    def draw(rng: np.random.Generator) -> np.ndarray:
        n = dims[rng.integers(len(dims))]
        return scale * (1.0 - rng.random(n))

    return draw


def _default_sampler(fan: Fan, scale: float = 1.0):
    if isinstance(fan, VertexTableFan):
        return box_sampler(dims=(fan.n,), scale=scale)
    return box_sampler(scale=scale)


def _value(fan: Fan, values: np.ndarray, cfg: SolverConfig) -> float:
    return welfare(fan, UtilityVector(values), cfg).value


class _Tracker:
    """Counts violations and keeps the single worst margin.

    Checkers never raise on a trial: a welfare computation that fails to
    converge (possible only for fans violating monotone inclusion, whose
    welfare need not be well defined) is itself counted as a violation.
    """

    def __init__(self):
        self.violations = 0
        self.worst_margin = -math.inf
        self.worst_case = None

    def record(self, margin: float, **inputs) -> None:
        self.violations += 1
        if margin > self.worst_margin:
            self.worst_margin = margin
            payload = {}
            for k, v in inputs.items():
                payload[k] = v.tolist() if isinstance(v, np.ndarray) else v
            payload["margin"] = None if math.isinf(margin) else margin
            self.worst_case = payload

    def solve_failed(self, exc: MaxIterExceededError, **inputs) -> None:
        self.record(math.inf, error=str(exc), **inputs)


def check_monotonicity(fan: Fan, trials: int = 1000, *, seed: int = 0,
                       cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> AxiomReport:
    """Raising utilities never lowers welfare; raising all of them raises it.

    Alternate trials test the weak form (a sparse nonnegative bump) and the
    strict form (a bump of at least 0.01 in every coordinate, so a genuine
    increase is required, not just absence of a decrease).
    """
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler(fan)
    margin = 10.0 * cfg.tol_abs
    tracker = _Tracker()
    for t in range(trials):
        y = draw(rng)
        n = len(y)
        strict = t % 2 == 0
        if strict:
            d = rng.uniform(0.01, 0.5, n)
        else:
            d = rng.uniform(0.0, 0.5, n)
            d[rng.random(n) < 0.5] = 0.0
        try:
            gap = _value(fan, y + d, cfg) - _value(fan, y, cfg)
        except MaxIterExceededError as exc:
            tracker.solve_failed(exc, y=y, d=d)
            continue
        if (strict and gap <= margin) or (not strict and gap < -margin):
            tracker.record(-gap, y=y, d=d, strict=strict)
    return AxiomReport("monotonicity", trials, tracker.violations, tracker.worst_case)


def check_inada(fan: Fan, trials: int = 1000, *, seed: int = 0,
                cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> AxiomReport:
    """A profile with a zero coordinate is welfare-equivalent to all zeros.

    Only meaningful when the weight set at level zero is the full simplex;
    other fans raise :class:`NotApplicableError`.
    """
    if not fan.full_simplex_at_zero():
        raise NotApplicableError(
            "inada requires the full simplex at level zero"
        )
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler(fan)
    margin = 10.0 * cfg.tol_abs
    tracker = _Tracker()
    for _ in range(trials):
        y = draw(rng)
        y[rng.integers(len(y))] = 0.0
        try:
            u = _value(fan, y, cfg)
        except MaxIterExceededError as exc:
            tracker.solve_failed(exc, y=y)
            continue
        if u > margin:
            tracker.record(u, y=y)
    return AxiomReport("inada", trials, tracker.violations, tracker.worst_case)


def check_convexity(fan: Fan, trials: int = 1000, *, seed: int = 0,
                    cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> AxiomReport:
    """Profiles strictly better than an equal split mix to something no worse.

    The comparison level is set 5% below the smaller of the two welfare
    values so the strict-preference premise holds with real slack.
    """
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler(fan)
    margin = 10.0 * cfg.tol_abs
    tracker = _Tracker()
    for _ in range(trials):
        x = draw(rng)
        y = draw(rng)
        while len(y) != len(x):
            y = draw(rng)
        alpha = rng.uniform(0.05, 0.95)
        try:
            c = 0.95 * min(_value(fan, x, cfg), _value(fan, y, cfg))
            u_mix = _value(fan, alpha * x + (1.0 - alpha) * y, cfg)
        except MaxIterExceededError as exc:
            tracker.solve_failed(exc, x=x, y=y, alpha=alpha)
            continue
        if u_mix < c - margin:
            tracker.record(c - u_mix, x=x, y=y, alpha=alpha, c=c, u_mix=u_mix)
    return AxiomReport("convexity", trials, tracker.violations, tracker.worst_case)


def check_mixing_invariance(fan: Fan, trials: int = 1000, *, seed: int = 0,
                            cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> AxiomReport:
    """Mixing a profile with its own welfare level leaves welfare unchanged."""
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler(fan)
    margin = 10.0 * cfg.tol_abs
    tracker = _Tracker()
    for _ in range(trials):
        x = draw(rng)
        alpha = rng.uniform(0.05, 0.95)
        try:
            c = _value(fan, x, cfg)
            mixed = alpha * x + (1.0 - alpha) * np.full(len(x), c)
            drift = abs(_value(fan, mixed, cfg) - c)
        except MaxIterExceededError as exc:
            tracker.solve_failed(exc, x=x, alpha=alpha)
            continue
        if drift > margin:
            tracker.record(drift, x=x, alpha=alpha, c=c)
    return AxiomReport("mixing_invariance", trials, tracker.violations, tracker.worst_case)


def check_homotheticity(fan: Fan, mode: str, trials: int = 1000, *, seed: int = 0,
                        cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> AxiomReport:
    """Strict preference over an equal split survives proportional scaling.

    ``mode`` "downwards" scales by factors below one and applies to
    increasing fans; "upwards" scales above one and applies to decreasing
    fans. Constant fans qualify for both. Direction mismatches raise
    :class:`NotApplicableError`.
    """
    if mode not in ("downwards", "upwards"):
        raise ValueError(f"mode must be 'downwards' or 'upwards', got {mode!r}")
    allowed = ("increasing", "constant") if mode == "downwards" else ("decreasing", "constant")
    if fan.direction not in allowed:
        raise NotApplicableError(
            f"{mode} homotheticity does not apply to a {fan.direction} fan"
        )
    rng = np.random.default_rng(seed)
    draw = sampler or _default_sampler(fan)
    margin = 10.0 * cfg.tol_abs
    tracker = _Tracker()
    for _ in range(trials):
        x = draw(rng)
        lam = rng.uniform(0.1, 0.9) if mode == "downwards" else rng.uniform(1.1, 3.0)
        try:
            c = 0.95 * _value(fan, x, cfg)
            u_scaled = _value(fan, lam * x, cfg)
        except MaxIterExceededError as exc:
            tracker.solve_failed(exc, x=x, lam=lam)
            continue
        if u_scaled < lam * c - margin:
            tracker.record(lam * c - u_scaled, x=x, lam=lam, c=c)
    name = f"homotheticity_{mode}"
    return AxiomReport(name, trials, tracker.violations, tracker.worst_case)


def run_axiom_battery(fan: Fan, trials: int = 1000, *, seed: int = 0,
                      cfg: SolverConfig = DEFAULT_CONFIG, sampler=None) -> list[AxiomReport]:
    """Run every checker, recording inapplicable ones instead of raising."""
    jobs = [
        ("monotonicity", lambda s: check_monotonicity(fan, trials, seed=s, cfg=cfg, sampler=sampler)),
        ("inada", lambda s: check_inada(fan, trials, seed=s, cfg=cfg, sampler=sampler)),
        ("convexity", lambda s: check_convexity(fan, trials, seed=s, cfg=cfg, sampler=sampler)),
        ("mixing_invariance", lambda s: check_mixing_invariance(fan, trials, seed=s, cfg=cfg, sampler=sampler)),
        ("homotheticity_downwards", lambda s: check_homotheticity(fan, "downwards", trials, seed=s, cfg=cfg, sampler=sampler)),
        ("homotheticity_upwards", lambda s: check_homotheticity(fan, "upwards", trials, seed=s, cfg=cfg, sampler=sampler)),
    ]
    reports = []
    for offset, (name, job) in enumerate(jobs):
        try:
            reports.append(job(seed + 1000 * offset))
        except NotApplicableError as exc:
            reports.append(AxiomReport(name, 0, 0, applicable=False, note=str(exc)))
    return reports
