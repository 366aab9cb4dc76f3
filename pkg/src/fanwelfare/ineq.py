"""Atkinson equally-distributed-equivalent baseline.

The Atkinson EDE of an income distribution is the equal income everyone
could receive while leaving a mean-of-transformed-incomes planner
indifferent, with transform z**(1 - eps) for inequality aversion eps >= 0
(eps = 1, the logarithmic case, is excluded). The index is homothetic:
scaling every income scales the EDE by the same factor, so rankings between
distributions never depend on overall scale. Fan welfare deliberately drops
that property, and :func:`scaling_contrast_report` puts the two side by
side across scale factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, as_utility
from .fans import Fan
from .solver import DEFAULT_CONFIG, SolverConfig, rank

__all__ = ["AtkinsonParams", "atkinson_ede", "scaling_contrast_report"]


@dataclass(frozen=True)
class AtkinsonParams:
    """Inequality aversion eps >= 0 with eps != 1."""

    epsilon: float

    def __post_init__(self):
        if not np.isfinite(self.epsilon) or self.epsilon < 0.0:
            raise DomainError("epsilon must be a finite nonnegative real")
        if abs(self.epsilon - 1.0) <= 1e-9:
            raise DomainError("epsilon = 1 (the logarithmic case) is excluded")


def atkinson_ede(x, params: AtkinsonParams) -> float:
    """Equally distributed equivalent income ((1/n) sum x_i^(1-eps))^(1/(1-eps)).

    Equals the mean at eps = 0 and falls toward the minimum as eps grows.
    Zero incomes are rejected for eps > 1, where the negative exponent is
    undefined.
    """
    x = as_utility(x)
    eps = params.epsilon
    if eps == 0.0:
        return x.mean
    if eps > 1.0 and x.min <= 0.0:
        raise DomainError("zero incomes are undefined for aversion above one")
    p = 1.0 - eps
    return float(np.mean(x.values ** p) ** (1.0 / p))


def scaling_contrast_report(x, y, lambdas, fan: Fan, *,
                            atkinson: AtkinsonParams = AtkinsonParams(0.5),
                            cfg: SolverConfig = DEFAULT_CONFIG) -> list[dict]:
    """Contrast a homothetic index with fan welfare across scale factors.

    For each factor the report carries both EDE values, their ratio, and the
    two rankings. The EDE ratio (hence the Atkinson ranking) is constant in
    the factor by homotheticity and is asserted to be; the fan ranking may
    flip, which is the point of the comparison.
    """
    x = as_utility(x)
    y = as_utility(y)
    if len(x) != len(y):
        raise DomainError("distributions must have the same number of agents")
    rows = []
    base_ratio = None
    for lam in lambdas:
        lam = float(lam)
        if lam <= 0.0:
            raise DomainError("scale factors must be positive")
        ede_x = atkinson_ede(x.scaled(lam), atkinson)
        ede_y = atkinson_ede(y.scaled(lam), atkinson)
        ratio = ede_x / ede_y
        if base_ratio is None:
            base_ratio = ratio
        elif abs(ratio - base_ratio) > 1e-9 * max(1.0, abs(base_ratio)):
            raise AssertionError("EDE ratio drifted with scale; homotheticity broken")
        if abs(ede_x - ede_y) <= 1e-12 * max(1.0, lam):
            atkinson_rank = "indifferent"
        else:
            atkinson_rank = "x_preferred" if ede_x > ede_y else "y_preferred"
        rows.append({
            "lambda": lam,
            "ede_x": ede_x,
            "ede_y": ede_y,
            "ede_ratio": ratio,
            "atkinson_rank": atkinson_rank,
            "fan_rank": rank(fan, x.scaled(lam), y.scaled(lam), cfg),
        })
    return rows
