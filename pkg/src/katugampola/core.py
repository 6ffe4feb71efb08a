"""Parameter validation, grids and sampled functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from katugampola.errors import DomainError

#: Relative tolerance used when checking that a grid is uniform.
UNIFORM_RTOL = 1.0e-12


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class OperatorParams:
    """The quadruple :math:`(\\alpha, \\rho, a, b)` of a Katugampola integral.

    Use :func:`make_params` to construct validated instances.
    """

    alpha: float
    rho: float
    a: float
    b: float

    def __post_init__(self) -> None:
        for name in ("alpha", "rho", "a", "b"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real, got {value!r}", name)

        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}", "alpha")
        if self.rho <= 0:
            raise DomainError(f"rho must be positive, got {self.rho}", "rho")
        if self.a < 0:
            raise DomainError(f"a must be nonnegative, got {self.a}", "a")
        if self.a >= self.b:
            raise DomainError(f"need a < b, got a={self.a} and b={self.b}", "b")

    def with_interval(self, a: float, b: float) -> OperatorParams:
        return OperatorParams(self.alpha, self.rho, a, b)


def make_params(alpha: float, rho: float, a: float, b: float) -> OperatorParams:
    """Validate and bundle operator parameters.

    :raises DomainError: if ``alpha <= 0``, ``rho <= 0``, ``a < 0`` or
        ``a >= b``. The :attr:`~DomainError.field` attribute names the
        offending argument.
    """
    return OperatorParams(float(alpha), float(rho), float(a), float(b))


@dataclass(frozen=True)
class Grid:
    """A uniform grid on :math:`[a, b]` with step :attr:`spacing`."""

    points: np.ndarray
    spacing: float

    def __post_init__(self) -> None:
        points = _frozen(self.points)
        object.__setattr__(self, "points", points)

        if points.ndim != 1 or points.size < 2:
            raise DomainError("a grid needs at least 2 points", "points")
        if not self.spacing > 0:
            raise DomainError(f"spacing must be positive, got {self.spacing}", "spacing")

        steps = np.diff(points)
        if np.any(steps <= 0):
            raise DomainError("grid points must be strictly increasing", "points")

        tol = UNIFORM_RTOL * self.spacing + 4 * np.finfo(float).eps * np.max(np.abs(points))
        if np.max(np.abs(steps - self.spacing)) > tol:
            raise DomainError("grid points are not uniformly spaced", "points")

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return self.points.size


def make_uniform_grid(a: float, b: float, n_points: int) -> Grid:
    """Construct a uniform grid with ``n_points`` points on :math:`[a, b]`.

    The endpoints are reproduced exactly; interior points are ``a + i * h``.
    """
    if int(n_points) != n_points or n_points < 2:
        raise DomainError(f"n_points must be an integer >= 2, got {n_points}", "n_points")
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"need finite a < b, got a={a} and b={b}", "b")

    n_points = int(n_points)
    h = (b - a) / (n_points - 1)
    points = a + h * np.arange(n_points, dtype=np.float64)
    points[0] = a
    points[-1] = b

    return Grid(points, h)


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function on the points of a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = _frozen(self.values)
        object.__setattr__(self, "values", values)

        if values.shape != self.grid.points.shape:
            raise DomainError(
                f"expected {self.grid.points.size} values, got {values.size}", "values"
            )


def sample(x: Callable[[float], float], grid: Grid) -> SampledFunction:
    """Evaluate the callable *x* at every point of *grid*."""
    return SampledFunction(grid, evaluate(x, grid.points))


def evaluate(x: Callable[[float], float], points: np.ndarray) -> np.ndarray:
    """Evaluate a scalar callable on an array of points.

    Vectorized callables (e.g. :func:`numpy.cos`) are called once; anything
    that does not return an array of the right shape falls back to a loop.
    """
    points = np.asarray(points, dtype=np.float64)
    try:
        result = np.asarray(x(points), dtype=np.float64)
        if result.shape == points.shape:
            return result
        if result.ndim == 0:
            return np.full(points.shape, float(result))
    except (TypeError, ValueError):
        pass

    return np.array([float(x(float(p))) for p in points], dtype=np.float64)
