"""Welfare-weight families ("fans") and their support minima.

A fan maps a welfare level v >= 0 to a nonempty, closed, convex set of
welfare weights inside the probability simplex. The quantity driving
everything downstream is the support minimum

    support_min(fan, v, x) = min { w . x : w in fan(v) },

which every family here admits in closed form, so no LP machinery is
involved: the utilitarian singleton gives the mean, the full simplex gives
the min, contamination blends the two, and polytope families minimize over
their listed vertices.

Fans serialize to JSON documents of the form
``{"family": ..., "params": {...}, "direction": ...}``; see README for the
schema.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DimensionMismatchError,
    DomainError,
    InvalidFanError,
    InvalidLevelError,
    MonotoneFunction,
    UtilityVector,
    WeightVector,
    as_utility,
)

__all__ = [
    "Fan",
    "Utilitarian",
    "Rawlsian",
    "ContaminationFan",
    "StepFan",
    "VertexTableFan",
    "support_min",
    "sample_directions",
    "MonotoneCheckResult",
    "check_fan_monotone",
    "fan_to_dict",
    "fan_from_dict",
    "fan_to_json",
    "fan_from_json",
]


class Fan:
    """Base class for level-dependent welfare-weight sets.

    ``direction`` is "increasing" (sets grow with the level), "decreasing"
    (sets shrink), or "constant" (level-independent, hence both).
    """

    direction: str = "constant"

    def support_min_value(self, v: float, x: UtilityVector) -> float:
        raise NotImplementedError

    def witness(self, v: float, x: UtilityVector) -> WeightVector:
        raise NotImplementedError

    def support_function(self, v: float, d: np.ndarray) -> float:
        """max { w . d : w in fan(v) }, exact per family."""
        raise NotImplementedError

    def full_simplex_at_zero(self) -> bool:
        """True when the weight set at level zero is the whole simplex."""
        raise NotImplementedError

    def family_name(self) -> str:
        raise NotImplementedError

    def params_dict(self) -> dict:
        return {}


@dataclass(frozen=True)
class Utilitarian(Fan):
    """The singleton uniform weight set at every level: welfare is the mean."""

    direction = "constant"

    def support_min_value(self, v, x):
        return x.mean

    def witness(self, v, x):
        return WeightVector.uniform(len(x))

    def support_function(self, v, d):
        return float(np.mean(d))

    def full_simplex_at_zero(self):
        return False

    def family_name(self):
        return "utilitarian"


@dataclass(frozen=True)
class Rawlsian(Fan):
    """The full simplex at every level: welfare is the worst-off utility."""

    direction = "constant"

    def support_min_value(self, v, x):
        return x.min

    def witness(self, v, x):
        return WeightVector.unit(len(x), x.argmin)

    def support_function(self, v, d):
        return float(np.max(d))

    def full_simplex_at_zero(self):
        return True

    def family_name(self):
        return "rawlsian"


@dataclass(frozen=True)
class ContaminationFan(Fan):
    """Contamination around the uniform weight, widening with the level.

    At level v the weight set is { (1-a) u + a w : w in simplex } with
    a = aversion(v) and u uniform, so the support minimum is the blend
    (1 - a) * mean(x) + a * min(x). A monotone increasing fan.
    """

    aversion: MonotoneFunction
    direction = "increasing"

    def support_min_value(self, v, x):
        a = self.aversion(v)
        return (1.0 - a) * x.mean + a * x.min

    def witness(self, v, x):
        a = self.aversion(v)
        n = len(x)
        w = np.full(n, (1.0 - a) / n)
        w[x.argmin] += a
        return WeightVector(w)

    def support_function(self, v, d):
        a = self.aversion(v)
        d = np.asarray(d, dtype=float)
        return float((1.0 - a) * d.mean() + a * d.max())

    def full_simplex_at_zero(self):
        return False

    def family_name(self):
        return "contamination"

    def params_dict(self):
        return {"aversion": self.aversion.to_dict()}


@dataclass(frozen=True)
class StepFan(Fan):
    """Full simplex up to a threshold level, uniform singleton above it.

    Behaves exactly like the worst-off criterion while the level is at or
    below ``c_star`` and exactly like the mean above it. A monotone
    decreasing fan (upper hemicontinuous: the set at the threshold sits on
    the large side).
    """

    c_star: float
    direction = "decreasing"

    def __post_init__(self):
        c = self.c_star
        if not (np.isfinite(c) and c > 0.0):
            raise InvalidFanError("step threshold must be a finite positive level")

    def support_min_value(self, v, x):
        return x.min if v <= self.c_star else x.mean

    def witness(self, v, x):
        if v <= self.c_star:
            return WeightVector.unit(len(x), x.argmin)
        return WeightVector.uniform(len(x))

    def support_function(self, v, d):
        d = np.asarray(d, dtype=float)
        return float(d.max()) if v <= self.c_star else float(d.mean())

    def full_simplex_at_zero(self):
        return True

    def family_name(self):
        return "step"

    def params_dict(self):
        return {"c_star": self.c_star}


@dataclass(frozen=True)
class VertexTableFan(Fan):
    """Piecewise-constant fan given by explicit vertex lists per level band.

    ``breakpoints`` must start at 0 and increase strictly; band i covers
    [breakpoints[i], breakpoints[i+1]) and the last band extends to
    infinity, so the set at a breakpoint belongs to the band starting there.
    The weight set on a band is the convex hull of its vertex list, hence
    the support minimum is the minimum over listed vertices.

    ``direction`` is the *declared* monotonicity; it is not verified at
    construction (use :func:`check_fan_monotone`), which permits building
    deliberately invalid tables for falsification tests. The solver refuses
    declared-increasing tables: piecewise-constant fans are discontinuous,
    and the increasing-fan method requires continuity.
    """

    breakpoints: tuple[float, ...]
    vertex_sets: tuple[tuple[WeightVector, ...], ...] = field(hash=False)
    direction: str = "decreasing"

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if len(bps) == 0 or bps[0] != 0.0:
            raise InvalidFanError("breakpoints must start at 0")
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise InvalidFanError("breakpoints must increase strictly")
        if self.direction not in ("increasing", "decreasing"):
            raise InvalidFanError("declared direction must be 'increasing' or 'decreasing'")
        sets = []
        dim = None
        for raw_set in self.vertex_sets:
            vertices = tuple(
                w if isinstance(w, WeightVector) else WeightVector(w) for w in raw_set
            )
            if not vertices:
                raise InvalidFanError("every level band needs at least one vertex")
            for w in vertices:
                if dim is None:
                    dim = len(w)
                elif len(w) != dim:
                    raise InvalidFanError("all vertices must share one dimension")
            sets.append(vertices)
        if len(sets) != len(bps):
            raise InvalidFanError("need exactly one vertex set per breakpoint")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "vertex_sets", tuple(sets))
        matrices = tuple(
            np.array([w.weights for w in vertices]) for vertices in self.vertex_sets
        )
        object.__setattr__(self, "_matrices", matrices)

    @property
    def n(self) -> int:
        return len(self.vertex_sets[0][0])

    def band_index(self, v: float) -> int:
        return bisect_right(self.breakpoints, v) - 1

    def _check_dim(self, size: int) -> None:
        if size != self.n:
            raise DimensionMismatchError(
                f"fan dimension {self.n} != profile dimension {size}"
            )

    def support_min_value(self, v, x):
        self._check_dim(len(x))
        vals = self._matrices[self.band_index(v)] @ x.values
        return float(vals.min())

    def witness(self, v, x):
        self._check_dim(len(x))
        i = self.band_index(v)
        vals = self._matrices[i] @ x.values
        return self.vertex_sets[i][int(vals.argmin())]

    def support_function(self, v, d):
        d = np.asarray(d, dtype=float)
        self._check_dim(d.size)
        return float((self._matrices[self.band_index(v)] @ d).max())

    def full_simplex_at_zero(self):
        m = self._matrices[0]
        eye = np.eye(self.n)
        return all(
            np.abs(m - e).max(axis=1).min() <= 1e-12 for e in eye
        )

    def family_name(self):
        return "vertex_table"

    def params_dict(self):
        return {
            "breakpoints": list(self.breakpoints),
            "vertex_sets": [[w.tolist() for w in s] for s in self.vertex_sets],
        }


def support_min(fan: Fan, v: float, x) -> tuple[float, WeightVector]:
    """Worst-case weighted welfare of ``x`` at level ``v`` with a minimizer.

    The returned weight attains the minimum (ties broken toward the lowest
    index), so ``witness.dot(x) == value`` up to rounding. Raises
    :class:`InvalidLevelError` for negative levels.
    """
    if v < 0.0:
        raise InvalidLevelError(f"welfare level must be nonnegative, got {v!r}")
    x = as_utility(x)
    return fan.support_min_value(v, x), fan.witness(v, x)


def sample_directions(n: int, seed: int = 0) -> np.ndarray:
    """All signed coordinate directions plus 2n seeded random unit vectors."""
    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    rand = rng.normal(size=(2 * n, n))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    return np.vstack([eye, -eye, rand])


@dataclass(frozen=True)
class MonotoneCheckResult:
    """Outcome of a set-inclusion check, with the first offense if any."""

    ok: bool
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_fan_monotone(fan: Fan, levels, directions=None, *, dim: int | None = None,
                       seed: int = 0, tol: float = 1e-12) -> MonotoneCheckResult:
    """Verify declared set inclusion between consecutive levels.

    Compares support functions on a direction set: A is contained in B
    exactly when the support function of A is pointwise at most that of B,
    and support functions are computed in closed form per family, so the
    only approximation is direction coverage. ``directions`` defaults to
    :func:`sample_directions` (all signed coordinate axes plus seeded random
    units, at least 8 vectors); ``dim`` is required in that case unless the
    fan fixes its own dimension. Constant-direction fans are checked for
    inclusion both ways.
    """
    levels = [float(v) for v in levels]
    if any(v < 0.0 for v in levels):
        raise InvalidLevelError("levels must be nonnegative")
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be sorted ascending")
    if directions is None:
        if dim is None:
            dim = fan.n if isinstance(fan, VertexTableFan) else None
        if dim is None:
            raise ValueError("dim is required when directions are not supplied")
        directions = sample_directions(dim, seed=seed)
    else:
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        if len(directions) < 8:
            raise ValueError("need at least 8 direction vectors")

    grows = fan.direction == "increasing"
    both = fan.direction == "constant"
    for v_lo, v_hi in zip(levels, levels[1:]):
        for d in directions:
            h_lo = fan.support_function(v_lo, d)
            h_hi = fan.support_function(v_hi, d)
            bad_grow = h_lo > h_hi + tol
            bad_shrink = h_hi > h_lo + tol
            bad = (bad_grow or bad_shrink) if both else (bad_grow if grows else bad_shrink)
            if bad:
                return MonotoneCheckResult(False, {
                    "v": v_lo,
                    "v_next": v_hi,
                    "direction": d.tolist(),
                    "support_at_v": h_lo,
                    "support_at_v_next": h_hi,
                })
    return MonotoneCheckResult(True)


_FAMILY_TAGS = {"utilitarian", "rawlsian", "contamination", "step", "vertex_table"}


def fan_to_dict(fan: Fan) -> dict:
    return {
        "family": fan.family_name(),
        "params": fan.params_dict(),
        "direction": fan.direction,
    }


def fan_from_dict(data: dict) -> Fan:
    """Build a fan from its JSON document form."""
    family = data.get("family")
    if family not in _FAMILY_TAGS:
        raise InvalidFanError(f"unknown fan family: {family!r}")
    params = data.get("params", {}) or {}
    declared = data.get("direction")
    if family == "utilitarian":
        fan: Fan = Utilitarian()
    elif family == "rawlsian":
        fan = Rawlsian()
    elif family == "contamination":
        aversion = params.get("aversion") or params.get("rho")
        if aversion is None:
            raise InvalidFanError("contamination requires an 'aversion' monotone function")
        fan = ContaminationFan(MonotoneFunction.from_dict(aversion))
    elif family == "step":
        if "c_star" not in params:
            raise InvalidFanError("step requires 'c_star'")
        fan = StepFan(float(params["c_star"]))
    else:
        return VertexTableFan(
            breakpoints=tuple(params["breakpoints"]),
            vertex_sets=tuple(tuple(s) for s in params["vertex_sets"]),
            direction=declared or "decreasing",
        )
    if declared is not None and declared != fan.direction:
        raise InvalidFanError(
            f"declared direction {declared!r} conflicts with {family}'s "
            f"intrinsic direction {fan.direction!r}"
        )
    return fan


def fan_to_json(fan: Fan) -> str:
    return json.dumps(fan_to_dict(fan))


def fan_from_json(text: str) -> Fan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidFanError(f"fan document is not valid JSON: {exc}") from exc
    return fan_from_dict(data)
