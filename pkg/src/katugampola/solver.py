r"""Fractional integral equations through their Cauchy-problem replacement.

The equation

.. math::

    I^{\alpha,\rho}_{0+} x(t) + x(t) = f(t), \qquad x(0) = x_0,

is turned into an algebraic constraint for :math:`x` coupled to ordinary
differential equations for the moments :math:`V_k` by replacing the
fractional integral with its truncated series. On a grid the moments are
advanced with the same cell weights as
:func:`~katugampola.approx.compute_moments_left`, so that the constraint at
:math:`t_i` is linear in :math:`x_i` and is solved exactly at every step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from katugampola.approx import (
    Rule,
    moment_cell_weights,
    scaled_moment_terms,
    series_coefficients,
)
from katugampola.core import Grid, OperatorParams, evaluate
from katugampola.errors import ConsistencyError, DomainError, SingularPivotError
from katugampola.exact import exact_left_power

log = logging.getLogger(__name__)

#: Pivots below this magnitude are treated as singular.
PIVOT_TOL = 1.0e-12
#: Allowed mismatch between the initial value and ``f(0)``.
CONSISTENCY_TOL = 1.0e-9


@dataclass(frozen=True)
class IntegralEquationProblem:
    """The equation :math:`I^{\\alpha,\\rho}_{0+} x + x = f` with :math:`x(0) = x_0`."""

    params: OperatorParams
    f: Callable[[float], float]
    x0: float = 0.0

    def __post_init__(self) -> None:
        if self.params.a != 0:
            raise DomainError(f"the equation is posed from a = 0, got a={self.params.a}", "a")


@dataclass(frozen=True)
class SolverSolution:
    grid: Grid
    x: np.ndarray
    V: np.ndarray
    N: int


def paper_problem(params: OperatorParams) -> IntegralEquationProblem:
    """The equation whose exact solution is :math:`x(t) = t^{2\\rho}`."""
    return manufactured_problem(params, 2)


def manufactured_problem(params: OperatorParams, m: float) -> IntegralEquationProblem:
    """An equation with the known solution :math:`x(t) = t^{\\rho m}`."""
    rho = params.rho

    def f(t: float) -> float:
        return t ** (rho * m) + exact_left_power(params, m, t)

    return IntegralEquationProblem(params, f, 0.0)


def _scaled(alpha: float, d: float, V: np.ndarray) -> np.ndarray:
    # d**(alpha - k) * V[k - 1, :] for a single grid point
    return scaled_moment_terms(alpha, np.full(V.shape[1], d), V)


def solve_integral_equation(
    problem: IntegralEquationProblem,
    grid: Grid,
    N: int,
    rule: Rule = "quadratic",
) -> SolverSolution:
    """March the Cauchy problem over *grid* with truncation order *N*.

    :raises ConsistencyError: if ``|f(0) - x0| > 1e-9``; the constraint at
        :math:`t = 0` forces :math:`x(0) = f(0)`.
    :raises SingularPivotError: if the coefficient of :math:`x(t_i)` in the
        constraint vanishes at some grid point.
    """
    params = problem.params
    alpha, rho = params.alpha, params.rho
    if grid.a != 0:
        raise DomainError(f"the grid must start at 0, got {grid.a}", "grid")
    if grid.b > params.b:
        raise DomainError(f"the grid ends at {grid.b}, beyond b={params.b}", "grid")

    coeffs = series_coefficients(params, N)
    N = coeffs.N
    A, B = coeffs.A, coeffs.B

    f = evaluate(problem.f, grid.points)
    if abs(f[0] - problem.x0) > CONSISTENCY_TOL:
        raise ConsistencyError(
            f"x0={problem.x0} is inconsistent with f(0)={f[0]}: the equation "
            f"at t = 0 requires x(0) = f(0)",
            "x0",
        )

    d = grid.points**rho
    cw = moment_cell_weights(d, N, rho, rule)
    n = d.size

    diag = A * d**alpha + 1.0
    if np.any(np.abs(diag) < PIVOT_TOL):
        i = int(np.argmin(np.abs(diag)))
        raise SingularPivotError(f"singular constraint at t={grid.points[i]}")

    x = np.zeros(n)
    V = np.zeros((N, n))
    x[0] = problem.x0

    # start-up: the first cell may look ahead, solve those steps together
    m0 = int(cw.nodes[0].max())
    coef = np.zeros((N, m0 + 1, m0 + 1))
    for i in range(1, m0 + 1):
        coef[:, i, :] = coef[:, i - 1, :]
        for r, q in enumerate(cw.nodes[i - 1]):
            coef[:, i, q] += cw.weights[:, i - 1, r]

    system = np.diag(diag[: m0 + 1])
    for i in range(1, m0 + 1):
        system[i] -= B @ _scaled(alpha, d[i], coef[:, i, :])
    rhs = f[: m0 + 1] - system[:, 0] * x[0]
    system, rhs = system[1:, 1:], rhs[1:]

    if abs(np.linalg.det(system)) < PIVOT_TOL ** (m0):
        raise SingularPivotError("singular start-up system")
    x[1 : m0 + 1] = np.linalg.solve(system, rhs)

    for i in range(1, m0 + 1):
        nodes = cw.nodes[i - 1]
        V[:, i] = V[:, i - 1] + cw.weights[:, i - 1, :] @ x[nodes]

    # march: V_k(t_i) = known_k + implicit_k * x_i
    for i in range(m0 + 1, n):
        nodes = cw.nodes[i - 1]
        weights = cw.weights[:, i - 1, :]
        known = V[:, i - 1] + weights[:, :-1] @ x[nodes[:-1]]
        implicit = weights[:, -1]

        terms = _scaled(alpha, d[i], np.stack([known, implicit], axis=1))
        pivot = diag[i] - B @ terms[:, 1]
        if abs(pivot) < PIVOT_TOL:
            raise SingularPivotError(f"singular constraint at t={grid.points[i]}")

        x[i] = (f[i] + B @ terms[:, 0]) / pivot
        V[:, i] = V[:, i - 1] + weights @ x[nodes]

    log.debug("solved on %d points with N=%d (rule %s)", n, N, rule)
    x.setflags(write=False)
    V.setflags(write=False)
    return SolverSolution(grid, x, V, N)
