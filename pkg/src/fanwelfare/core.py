"""Shared domain types for self-referential welfare computation.

Utility profiles live in the nonnegative orthant; no upper bound is imposed
here (the triage model restricts its own inputs to the unit interval). All
types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WelfareError",
    "EmptyVectorError",
    "NegativeEntryError",
    "NonFiniteEntryError",
    "DomainError",
    "InvalidLevelError",
    "InvalidFanError",
    "DimensionMismatchError",
    "MaxIterExceededError",
    "InfeasiblePolicyError",
    "NotApplicableError",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "UtilityVector",
    "WeightVector",
    "MonotoneFunction",
    "WelfareResult",
    "validate_utility",
    "as_utility",
    "mean_and_min",
]


class WelfareError(Exception):
    """Base class for errors raised by this package."""


class EmptyVectorError(WelfareError):
    """A utility profile with no agents."""


class NegativeEntryError(WelfareError):
    """A utility profile with a negative entry."""


class NonFiniteEntryError(WelfareError):
    """A utility profile with a NaN or infinite entry."""


class DomainError(WelfareError):
    """An argument outside the mathematical domain of an operation."""


class InvalidLevelError(WelfareError):
    """A negative welfare level."""


class InvalidFanError(WelfareError):
    """A weight family that violates its construction rules."""


class DimensionMismatchError(WelfareError):
    """Operands whose agent dimensions disagree."""


class MaxIterExceededError(WelfareError):
    """The solver could not reach the requested residual.

    Carries the last iterate and its residual for diagnosis.
    """

    def __init__(self, message: str, value: float | None = None,
                 residual: float | None = None, iterations: int | None = None):
        super().__init__(message)
        self.value = value
        self.residual = residual
        self.iterations = iterations


class InfeasiblePolicyError(WelfareError):
    """A treatment policy exceeding available capacity."""


class NotApplicableError(WelfareError):
    """An axiom check that does not apply to the given fan."""


@dataclass(frozen=True)
class Tolerances:
    """Package-wide numeric tolerances."""

    fixed_point: float = 1e-10  # accepted |support_min(v, x) - v| at a solution
    simplex: float = 1e-12      # accepted |sum(weights) - 1| at construction


DEFAULT_TOLERANCES = Tolerances()


class UtilityVector:
    """An ordered profile of nonnegative, finite agent utilities.

    Summary statistics (mean, min, max, first argmin index) are computed once
    at construction; the underlying array is read-only.
    """

    __slots__ = ("values", "mean", "min", "max", "argmin")

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1:
            raise DomainError("utility profile must be one-dimensional")
        if arr.size == 0:
            raise EmptyVectorError("utility profile must contain at least one agent")
        if not np.isfinite(arr).all():
            raise NonFiniteEntryError("utility profile contains a non-finite entry")
        if (arr < 0.0).any():
            raise NegativeEntryError("utility profile contains a negative entry")
        arr = arr.copy()
        arr.flags.writeable = False
        self.values = arr
        self.mean = float(arr.mean())
        self.min = float(arr.min())
        self.max = float(arr.max())
        self.argmin = int(arr.argmin())  # lowest index on ties

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"UtilityVector({self.values.tolist()!r})"

    def scaled(self, factor: float) -> "UtilityVector":
        """The profile with every utility multiplied by ``factor`` >= 0."""
        return UtilityVector(self.values * float(factor))

    def tolist(self) -> list[float]:
        return self.values.tolist()


def validate_utility(values) -> UtilityVector:
    """Validate raw values into a :class:`UtilityVector` or raise."""
    return UtilityVector(values)


def as_utility(x) -> UtilityVector:
    """Pass through a :class:`UtilityVector`, validating anything else."""
    return x if isinstance(x, UtilityVector) else UtilityVector(x)


def mean_and_min(x: UtilityVector) -> tuple[float, float]:
    """Arithmetic mean and worst-off utility of a profile."""
    x = as_utility(x)
    return x.mean, x.min


class WeightVector:
    """A welfare weight: a point of the probability simplex.

    Entries must be nonnegative and sum to one within ``tol``
    (default :data:`DEFAULT_TOLERANCES.simplex`).
    """

    __slots__ = ("weights",)

    def __init__(self, weights, tol: float = DEFAULT_TOLERANCES.simplex) -> None:
        arr = np.asarray(weights, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("weights must form a nonempty one-dimensional vector")
        if not np.isfinite(arr).all():
            raise NonFiniteEntryError("weights contain a non-finite entry")
        if (arr < 0.0).any():
            raise NegativeEntryError("weights contain a negative entry")
        total = float(arr.sum())
        if abs(total - 1.0) > tol:
            raise DomainError(f"weights must sum to 1 within {tol:g}; got {total!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.weights = arr

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def unit(cls, n: int, index: int) -> "WeightVector":
        w = np.zeros(n)
        w[index] = 1.0
        return cls(w)

    def dot(self, x) -> float:
        """Inner product with a utility profile or plain array."""
        values = x.values if isinstance(x, UtilityVector) else np.asarray(x, dtype=float)
        if values.shape != self.weights.shape:
            raise DimensionMismatchError(
                f"weight dimension {self.weights.size} != profile dimension {values.size}"
            )
        return float(self.weights @ values)

    def __len__(self) -> int:
        return self.weights.size

    def __repr__(self) -> str:
        return f"WeightVector({self.weights.tolist()!r})"

    def tolist(self) -> list[float]:
        return self.weights.tolist()


@dataclass(frozen=True)
class MonotoneFunction:
    """A continuous, strictly increasing map of [0, 1] onto itself.

    Serves as the level-dependent inequality-aversion profile of contamination
    fans: 0 means purely mean-oriented, 1 means purely worst-off-oriented.
    Three kinds are supported: the identity, a power ``v**p`` with p > 0, and
    a connected piecewise-linear interpolation through given knots.

    Arguments outside [0, 1] are clamped before evaluation, extending the map
    constantly beyond its domain; the strict-increase requirement applies on
    [0, 1] only.
    """

    kind: str
    exponent: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind == "identity":
            if self.exponent is not None or self.knots is not None:
                raise DomainError("identity takes no parameters")
        elif self.kind == "power":
            p = self.exponent
            if p is None or not math.isfinite(p) or p <= 0.0:
                raise DomainError("power kind requires a finite exponent > 0")
            if self.knots is not None:
                raise DomainError("power kind takes no knots")
        elif self.kind == "piecewise_linear":
            knots = self.knots
            if self.exponent is not None:
                raise DomainError("piecewise_linear kind takes no exponent")
            if knots is None or len(knots) < 2:
                raise DomainError("piecewise_linear requires at least two knots")
            knots = tuple((float(v), float(r)) for v, r in knots)
            object.__setattr__(self, "knots", knots)
            vs = [v for v, _ in knots]
            rs = [r for _, r in knots]
            if abs(vs[0]) > 1e-12 or abs(rs[0]) > 1e-12:
                raise DomainError("first knot must be (0, 0)")
            if abs(vs[-1] - 1.0) > 1e-12 or abs(rs[-1] - 1.0) > 1e-12:
                raise DomainError("last knot must be (1, 1)")
            if any(b <= a for a, b in zip(vs, vs[1:])):
                raise DomainError("knot arguments must be strictly increasing")
            if any(b <= a for a, b in zip(rs, rs[1:])):
                raise DomainError("knot values must be strictly increasing")
        else:
            raise DomainError(f"unknown monotone-function kind: {self.kind!r}")

    @classmethod
    def identity(cls) -> "MonotoneFunction":
        return cls("identity")

    @classmethod
    def power(cls, exponent: float) -> "MonotoneFunction":
        return cls("power", exponent=float(exponent))

    @classmethod
    def piecewise_linear(cls, knots) -> "MonotoneFunction":
        return cls("piecewise_linear", knots=tuple((float(v), float(r)) for v, r in knots))

    def __call__(self, v: float) -> float:
        v = 0.0 if v < 0.0 else (1.0 if v > 1.0 else float(v))
        if self.kind == "identity":
            return v
        if self.kind == "power":
            return v ** self.exponent
        vs = [k[0] for k in self.knots]
        i = bisect_right(vs, v) - 1
        if i >= len(vs) - 1:
            return self.knots[-1][1]
        (v0, r0), (v1, r1) = self.knots[i], self.knots[i + 1]
        return r0 + (r1 - r0) * (v - v0) / (v1 - v0)

    def map_array(self, v: np.ndarray) -> np.ndarray:
        """Vectorized evaluation (arguments clamped into [0, 1])."""
        v = np.clip(np.asarray(v, dtype=float), 0.0, 1.0)
        if self.kind == "identity":
            return v
        if self.kind == "power":
            return v ** self.exponent
        vs = np.array([k[0] for k in self.knots])
        rs = np.array([k[1] for k in self.knots])
        return np.interp(v, vs, rs)

    def derivative(self, v: float) -> float:
        """One-sided slope: right-hand everywhere, left-hand at v = 1."""
        v = 0.0 if v < 0.0 else (1.0 if v > 1.0 else float(v))
        if self.kind == "identity":
            return 1.0
        if self.kind == "power":
            p = self.exponent
            if v == 0.0 and p < 1.0:
                return math.inf
            return p * v ** (p - 1.0)
        vs = [k[0] for k in self.knots]
        i = min(bisect_right(vs, v) - 1, len(vs) - 2)
        (v0, r0), (v1, r1) = self.knots[i], self.knots[i + 1]
        return (r1 - r0) / (v1 - v0)

    def to_dict(self) -> dict:
        if self.kind == "identity":
            return {"kind": "identity"}
        if self.kind == "power":
            return {"kind": "power", "exponent": self.exponent}
        return {"kind": "piecewise_linear", "knots": [list(k) for k in self.knots]}

    @classmethod
    def from_dict(cls, data: dict) -> "MonotoneFunction":
        kind = data.get("kind")
        if kind == "identity":
            return cls.identity()
        if kind == "power":
            return cls.power(data["exponent"])
        if kind == "piecewise_linear":
            return cls.piecewise_linear(data["knots"])
        raise DomainError(f"unknown monotone-function kind: {kind!r}")


@dataclass(frozen=True)
class WelfareResult:
    """A solved welfare value with its witness weight and diagnostics.

    ``witness`` attains the support minimum at the solved level, so
    ``witness.dot(x)`` equals ``value`` within the solver tolerance.
    ``method`` is one of ``iteration``, ``bisection``, ``closed-form``.
    """

    value: float
    witness: WeightVector
    residual: float
    iterations: int
    method: str

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method,
        }
