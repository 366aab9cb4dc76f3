"""Brute-force reference implementations for fans and the solver.

Two independent checks live here. Support minima are re-derived by
enumerating weight candidates on a simplex grid (contamination and hull
families through their convex-combination reparameterizations, so the
enumerated candidates always include the true extreme points). Welfare
values are re-derived by scanning the level axis for the smallest qualifying
level, deliberately mirroring the infimum in the definition rather than any
fixed-point search; this catches solvers that settle on a non-minimal fixed
point when the qualifying set is disconnected.

Everything here is allowed to be orders of magnitude slower than the main
path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    DimensionMismatchError,
    InvalidLevelError,
    UtilityVector,
    as_utility,
)
from .fans import (
    ContaminationFan,
    Fan,
    Rawlsian,
    StepFan,
    Utilitarian,
    VertexTableFan,
)

__all__ = ["SimplexGrid", "brute_support_min", "brute_welfare"]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


@lru_cache(maxsize=64)
def _grid_points(n: int, resolution: int) -> np.ndarray:
    pts = np.array(list(_compositions(resolution, n)), dtype=float) / resolution
    pts.flags.writeable = False
    return pts


@dataclass(frozen=True)
class SimplexGrid:
    """All weight vectors with coordinates k/m summing to one.

    Holds C(m + n - 1, n - 1) points; every point is a valid weight vector.
    """

    n: int
    resolution: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError("grid dimension must be at least 1")
        if self.resolution < 1:
            raise ValueError("grid resolution must be at least 1")

    @property
    def points(self) -> np.ndarray:
        return _grid_points(self.n, self.resolution)

    def __len__(self) -> int:
        return math.comb(self.resolution + self.n - 1, self.n - 1)


def _hull_grid_values(vertex_matrix: np.ndarray, resolution: int,
                      xv: np.ndarray) -> np.ndarray:
    """Dot products of x with hull points enumerated by coefficient grid."""
    projections = vertex_matrix @ xv
    coeffs = _grid_points(len(projections), resolution)
    return coeffs @ projections


def brute_support_min(grid: SimplexGrid, fan: Fan, v: float, x) -> float:
    """Support minimum recomputed by grid enumeration.

    Never below the exact value, and exact whenever the minimizing extreme
    point lies on the grid (coordinate vertices always do, so the families
    here are matched exactly up to rounding); the general gap shrinks like
    O(1/resolution).
    """
    if v < 0.0:
        raise InvalidLevelError(f"welfare level must be nonnegative, got {v!r}")
    x = as_utility(x)
    if grid.n != len(x):
        raise DimensionMismatchError(
            f"grid dimension {grid.n} != profile dimension {len(x)}"
        )
    xv = x.values
    if isinstance(fan, Utilitarian):
        # Singleton set: the only member is the uniform weight.
        return float(np.full(len(x), 1.0 / len(x)) @ xv)
    if isinstance(fan, Rawlsian):
        return float((grid.points @ xv).min())
    if isinstance(fan, ContaminationFan):
        a = fan.aversion(v)
        candidates = (1.0 - a) * xv.mean() + a * (grid.points @ xv)
        return float(candidates.min())
    if isinstance(fan, StepFan):
        if v <= fan.c_star:
            return float((grid.points @ xv).min())
        return float(np.full(len(x), 1.0 / len(x)) @ xv)
    if isinstance(fan, VertexTableFan):
        matrix = fan._matrices[fan.band_index(v)]
        return float(_hull_grid_values(matrix, grid.resolution, xv).min())
    raise TypeError(f"unsupported fan type: {type(fan).__name__}")


class _SupportFloor:
    """Level-dependence of the support minimum, rebuilt from first principles.

    Precomputes the handful of scalars the support minimum depends on, either
    exactly or through grid enumeration when ``simplex_m`` is given, and then
    evaluates the level curve pointwise or vectorized.
    """

    def __init__(self, fan: Fan, x: UtilityVector, simplex_m: int | None = None):
        xv = x.values
        n = len(x)
        uniform_value = float(np.full(n, 1.0 / n) @ xv)
        if simplex_m is not None:
            simplex_min = float((_grid_points(n, simplex_m) @ xv).min())
        else:
            simplex_min = float(xv.min())
        if isinstance(fan, Utilitarian):
            self.kind = "const"
            self.const = uniform_value
        elif isinstance(fan, Rawlsian):
            self.kind = "const"
            self.const = simplex_min
        elif isinstance(fan, ContaminationFan):
            self.kind = "contamination"
            self.center = uniform_value
            self.floor = simplex_min
            self.aversion = fan.aversion
        elif isinstance(fan, StepFan):
            self.kind = "step"
            self.low = simplex_min
            self.high = uniform_value
            self.c_star = fan.c_star
        elif isinstance(fan, VertexTableFan):
            self.kind = "table"
            self.breakpoints = np.asarray(fan.breakpoints)
            values = []
            for matrix in fan._matrices:
                if simplex_m is not None:
                    values.append(float(_hull_grid_values(matrix, simplex_m, xv).min()))
                else:
                    values.append(float((matrix @ xv).min()))
            self.values = np.asarray(values)
        else:
            raise TypeError(f"unsupported fan type: {type(fan).__name__}")

    def curve(self, levels: np.ndarray) -> np.ndarray:
        if self.kind == "const":
            return np.full_like(levels, self.const)
        if self.kind == "contamination":
            a = self.aversion.map_array(levels)
            return (1.0 - a) * self.center + a * self.floor
        if self.kind == "step":
            return np.where(levels <= self.c_star, self.low, self.high)
        idx = np.searchsorted(self.breakpoints, levels, side="right") - 1
        return self.values[idx]

    def point(self, level: float) -> float:
        if self.kind == "const":
            return self.const
        if self.kind == "contamination":
            a = self.aversion(level)
            return (1.0 - a) * self.center + a * self.floor
        if self.kind == "step":
            return self.low if level <= self.c_star else self.high
        idx = int(np.searchsorted(self.breakpoints, level, side="right")) - 1
        return float(self.values[idx])


def brute_welfare(fan: Fan, x, v_grid_resolution: int = 1000,
                  simplex_m: int | None = None) -> float:
    """Welfare recomputed by scanning levels for the smallest qualifying one.

    Scans a uniform level grid on [0, max(x)] for the first level whose
    support minimum does not exceed it, then refines inside that single grid
    cell by predicate bisection. Headline accuracy is max(x)/resolution (the
    scan cannot see qualifying components narrower than a cell); within the
    located cell the refinement is essentially exact. With ``simplex_m`` the
    support minima are themselves grid-enumerated instead of closed-form.
    """
    if v_grid_resolution < 100:
        raise ValueError("v_grid_resolution must be at least 100")
    x = as_utility(x)
    if isinstance(fan, VertexTableFan) and fan.n != len(x):
        raise DimensionMismatchError(
            f"fan dimension {fan.n} != profile dimension {len(x)}"
        )
    top = x.max
    if top == 0.0:
        return 0.0
    floor = _SupportFloor(fan, x, simplex_m)
    levels = np.linspace(0.0, top, v_grid_resolution + 1)
    qualifying = floor.curve(levels) <= levels
    first = int(np.argmax(qualifying))
    if not qualifying[first]:
        # Cannot happen for a genuine fan: weights average x, so the support
        # minimum at max(x) is at most max(x).
        return top
    if first == 0:
        return 0.0
    lo = float(levels[first - 1])
    hi = float(levels[first])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if floor.point(mid) <= mid:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, top):
            break
    return hi
