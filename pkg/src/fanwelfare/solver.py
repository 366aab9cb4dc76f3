"""Fixed-point computation of fan social welfare values.

The welfare of a profile x under a fan is the smallest level v at which the
worst-case weighted welfare equals the level itself:

    welfare = inf { v : support_min(fan, v, x) <= v }.

Method dispatch follows the fan's direction. For decreasing (and constant)
fans the map v -> support_min(v, x) is nondecreasing, so the iteration
v <- support_min(v, x) started at 0 climbs monotonically to the smallest
fixed point and, for piecewise-constant families, lands on it exactly after
finitely many steps. Plain bisection on the qualifying-level predicate would
be unsound there: the qualifying set need not be an interval (a step fan
with min(x) below the threshold and mean(x) above it qualifies on
[min, c*] and again on [mean, inf)). For increasing fans the gap
g(v) = support_min(v, x) - v is strictly decreasing and continuous, so the
unique root is bracketed on [0, max(x)] and found by bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DEFAULT_TOLERANCES,
    DimensionMismatchError,
    DomainError,
    InvalidFanError,
    MaxIterExceededError,
    UtilityVector,
    WelfareResult,
    as_utility,
)
from .fans import Fan, VertexTableFan

__all__ = [
    "SolverConfig",
    "DEFAULT_CONFIG",
    "welfare",
    "welfare_closed_form_identity",
    "rank",
]


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs: absolute tolerance, iteration cap, search-bound factor."""

    tol_abs: float = DEFAULT_TOLERANCES.fixed_point
    max_iter: int = 10_000
    v_upper_factor: float = 1.0

    def __post_init__(self):
        if not self.tol_abs > 0.0:
            raise DomainError("tol_abs must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")
        if self.v_upper_factor < 1.0:
            raise DomainError(
                "v_upper_factor below 1 cannot bracket the fixed point "
                "(the support minimum never exceeds max(x))"
            )


DEFAULT_CONFIG = SolverConfig()


def welfare(fan: Fan, x, cfg: SolverConfig = DEFAULT_CONFIG) -> WelfareResult:
    """Solve the self-referential welfare of ``x`` under ``fan``.

    The result satisfies |support_min(value, x) - value| <= ``cfg.tol_abs``
    and lies in [min(x), max(x)]. Raises :class:`InvalidFanError` for
    declared-increasing vertex tables (discontinuous, so the increasing-fan
    bisection contract does not apply) and :class:`MaxIterExceededError`
    when the residual target is unreachable within ``cfg.max_iter`` steps.
    """
    x = as_utility(x)
    if isinstance(fan, VertexTableFan):
        if len(x) != fan.n:
            raise DimensionMismatchError(
                f"fan dimension {fan.n} != profile dimension {len(x)}"
            )
        if fan.direction == "increasing":
            raise InvalidFanError(
                "declared-increasing vertex tables are piecewise constant, hence "
                "discontinuous; only continuous increasing fans are solvable"
            )
    if fan.direction == "increasing":
        return _bisect(fan, x, cfg)
    return _iterate(fan, x, cfg)


def _result(fan: Fan, x: UtilityVector, value: float, residual: float,
            iterations: int, method: str) -> WelfareResult:
    return WelfareResult(
        value=value,
        witness=fan.witness(value, x),
        residual=residual,
        iterations=iterations,
        method=method,
    )


def _iterate(fan: Fan, x: UtilityVector, cfg: SolverConfig) -> WelfareResult:
    v = 0.0
    for it in range(1, cfg.max_iter + 1):
        nv = fan.support_min_value(v, x)
        if abs(nv - v) <= cfg.tol_abs:
            resid = abs(fan.support_min_value(nv, x) - nv)
            if resid <= cfg.tol_abs:
                return _result(fan, x, nv, resid, it, "iteration")
            # Stalled on a jump of a piecewise-constant table: the step is
            # tiny but nv is not (yet) a fixed point. Try the jump target.
            jump = fan.support_min_value(nv, x)
            jump_resid = abs(fan.support_min_value(jump, x) - jump)
            if jump_resid <= cfg.tol_abs:
                return _result(fan, x, jump, jump_resid, it + 1, "iteration")
            raise MaxIterExceededError(
                f"iteration stalled at v={nv!r} with residual {resid:.3e}; "
                "the fan violates monotone inclusion",
                value=nv, residual=resid, iterations=it,
            )
        v = nv
    resid = abs(fan.support_min_value(v, x) - v)
    raise MaxIterExceededError(
        f"no fixed point within {cfg.max_iter} iterations; "
        f"last iterate {v!r} has residual {resid:.3e}",
        value=v, residual=resid, iterations=cfg.max_iter,
    )


def _bisect(fan: Fan, x: UtilityVector, cfg: SolverConfig) -> WelfareResult:
    lo = 0.0
    hi = cfg.v_upper_factor * x.max
    g_lo = fan.support_min_value(lo, x) - lo
    if abs(g_lo) <= cfg.tol_abs:
        return _result(fan, x, lo, abs(g_lo), 0, "bisection")
    g_hi = fan.support_min_value(hi, x) - hi
    if g_lo < 0.0 or g_hi > cfg.tol_abs:
        raise InvalidFanError(
            f"bracket [0, {hi!r}] does not enclose a sign change of the gap "
            f"(g(0)={g_lo!r}, g(hi)={g_hi!r})"
        )
    if abs(g_hi) <= cfg.tol_abs:
        return _result(fan, x, hi, abs(g_hi), 0, "bisection")
    for it in range(1, cfg.max_iter + 1):
        # Invariant: the bracket holds exactly one sign change of the gap.
        if not (g_lo >= 0.0 >= g_hi):
            raise InvalidFanError(
                "bracket lost its sign change; the support minimum is not "
                "monotone in the level"
            )
        mid = 0.5 * (lo + hi)
        g_mid = fan.support_min_value(mid, x) - mid
        if abs(g_mid) <= cfg.tol_abs:
            return _result(fan, x, mid, abs(g_mid), it, "bisection")
        if g_mid > 0.0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
        if hi - lo <= 4.0 * 2.3e-16 * max(hi, 1.0):
            break
    mid = 0.5 * (lo + hi)
    resid = abs(fan.support_min_value(mid, x) - mid)
    raise MaxIterExceededError(
        f"bisection exhausted at v={mid!r} with residual {resid:.3e}",
        value=mid, residual=resid, iterations=cfg.max_iter,
    )


def welfare_closed_form_identity(x) -> float:
    """Closed-form welfare for contamination with the identity aversion map.

    With aversion(v) = v the fixed point of v = (1 - v) * mean + v * min
    solves v * (1 + mean - min) = mean, hence mean / (1 + mean - min).
    Requires every utility strictly inside (0, 1), where the fixed point is
    interior and unique.
    """
    x = as_utility(x)
    if x.min <= 0.0 or x.max >= 1.0:
        raise DomainError("closed form requires every utility strictly inside (0, 1)")
    return x.mean / (1.0 + x.mean - x.min)


def rank(fan: Fan, x, y, cfg: SolverConfig = DEFAULT_CONFIG) -> str:
    """Compare two profiles: 'x_preferred', 'y_preferred', or 'indifferent'.

    Profiles whose welfare values differ by at most twice the solver
    tolerance are declared indifferent; equality at solver precision is not
    meaningful.
    """
    x = as_utility(x)
    y = as_utility(y)
    if len(x) != len(y):
        raise DimensionMismatchError(
            f"profiles have different lengths: {len(x)} vs {len(y)}"
        )
    ux = welfare(fan, x, cfg).value
    uy = welfare(fan, y, cfg).value
    if abs(ux - uy) <= 2.0 * cfg.tol_abs:
        return "indifferent"
    return "x_preferred" if ux > uy else "y_preferred"
