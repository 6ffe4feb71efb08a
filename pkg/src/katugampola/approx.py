r"""Truncated-series approximation of the Katugampola integrals.

The left integral is replaced by

.. math::

    I^{\alpha,\rho}_{a+} x(t) \approx A (t^\rho - a^\rho)^\alpha x(t)
        - \sum_{k = 1}^N B_k (t^\rho - a^\rho)^{\alpha - k} V_k(t),

where the moments

.. math::

    V_k(t) = \int_a^t \tau^{\rho - 1} (\tau^\rho - a^\rho)^{k - 1} x(\tau) \,\mathrm{d}\tau

solve ordinary differential equations, so the memory of the fractional
operator is carried by :math:`N` ordinary state variables. The right integral
is treated in the same way with moments :math:`W_k` accumulated from :math:`b`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from katugampola.core import Grid, OperatorParams, SampledFunction
from katugampola.errors import DomainError
from katugampola.exact import power_difference
from katugampola.specfun import binom_coeffs, gamma_fn

#: Above this magnitude of the log of a power factor the product with a
#: moment is formed in log space to avoid overflow and underflow.
_LOG_DIRECT_MAX = 600.0

Rule = Literal["trapezoid", "quadratic"]


@dataclass(frozen=True)
class SeriesCoefficients:
    """The coefficients :math:`A` and :math:`B_1, \\dots, B_N`."""

    N: int
    A: float
    B: np.ndarray


@dataclass(frozen=True)
class MomentFunctions:
    """Moments sampled on a grid.

    ``V[k - 1, i]`` holds :math:`V_k(t_i)` (left) or :math:`W_k(t_i)` (right).
    """

    grid: Grid
    V: np.ndarray
    side: str = "left"

    @property
    def N(self) -> int:
        return self.V.shape[0]


@dataclass(frozen=True)
class ApproxResult:
    grid: Grid
    values: np.ndarray
    N: int
    error_envelope: np.ndarray | None = None


def _check_order(N: int) -> int:
    if int(N) != N or N < 1:
        raise DomainError(f"N must be an integer >= 1, got {N}", "N")
    return int(N)


def series_coefficients(params: OperatorParams, N: int) -> SeriesCoefficients:
    """Compute :math:`A` and :math:`B_k`.

    With :math:`c_k` the binomial coefficients of :math:`(1 - u)^\\alpha`,
    :math:`A = \\rho^{-\\alpha} (1 + c_1 + \\cdots + c_N) / \\Gamma(\\alpha + 1)`
    and :math:`B_k = \\rho^{1 - \\alpha} k c_k / \\Gamma(\\alpha + 1)`. The
    latter equals the Gamma-ratio form but stays finite at integer
    :math:`\\alpha`.
    """
    N = _check_order(N)
    alpha, rho = params.alpha, params.rho

    c = binom_coeffs(alpha, N).coeffs
    g = gamma_fn(alpha + 1)
    A = rho**-alpha / g * math.fsum(c)
    B = rho ** (1 - alpha) / g * np.arange(1, N + 1) * c[1:]
    B.setflags(write=False)

    return SeriesCoefficients(N, A, B)


@dataclass(frozen=True)
class CellWeights:
    """Linear weights of the cumulative moment quadrature.

    The increment of moment ``k`` over cell ``j`` (between points ``j`` and
    ``j + 1``) is ``weights[k - 1, j] @ x[nodes[j]]``.
    """

    nodes: np.ndarray
    weights: np.ndarray


def _lagrange_basis(y: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    # y: (cells, m) evaluation points, nodes: (cells, r) -> (cells, m, r)
    r = nodes.shape[1]
    ell = np.ones(y.shape + (r,))
    for i in range(r):
        for j in range(r):
            if i != j:
                ell[..., i] *= (y - nodes[:, j, None]) / (nodes[:, i, None] - nodes[:, j, None])

    return ell


def moment_cell_weights(d: np.ndarray, N: int, rho: float, rule: Rule = "quadratic") -> CellWeights:
    r"""Quadrature weights for the moments :math:`\rho^{-1} \int d^{k - 1} x \, \mathrm{d}s`.

    :arg d: increasing distances :math:`s_i - a^\rho` of the image grid.
    :arg rule: ``"trapezoid"`` applies the trapezoid rule to the full
        integrand. ``"quadratic"`` integrates the weight :math:`d^{k - 1}`
        exactly against the piecewise quadratic interpolant of *x* in
        :math:`s` (nodes ``j - 1, j, j + 1`` on the first cell and
        ``j - 2, j - 1, j`` afterwards, so the scheme is causal past the
        first cell).
    """
    n = d.size
    cells = np.arange(n - 1)
    lo, hi = d[:-1], d[1:]
    half = 0.5 * (hi - lo)

    if rule == "trapezoid":
        nodes = np.stack([cells, cells + 1], axis=1)
        powers = np.arange(N)[:, None, None]
        weights = half[None, :, None] * d[nodes][None, :, :] ** powers / rho
        return CellWeights(nodes, weights)

    if rule != "quadratic":
        raise DomainError(f"unknown moment rule {rule!r}", "rule")

    if n == 2:
        nodes = np.array([[0, 1]])
    else:
        nodes = np.stack([cells - 1, cells, cells + 1], axis=1)
        nodes[0] = [0, 1, 2]

    # Gauss-Legendre with m points is exact for d^(k - 1) * quadratic, k <= N
    xi, wi = np.polynomial.legendre.leggauss(N // 2 + 2)
    y = 0.5 * (hi + lo)[:, None] + half[:, None] * xi[None, :]
    ell = _lagrange_basis(y, d[nodes])

    powers = y[None, :, :] ** np.arange(N)[:, None, None]
    weights = np.einsum("kcm,cmr,m->kcr", powers, ell, wi) * (half / rho)[None, :, None]

    return CellWeights(nodes, weights)


def _moments(d: np.ndarray, x: np.ndarray, rho: float, N: int, rule: Rule) -> np.ndarray:
    cw = moment_cell_weights(d, N, rho, rule)
    increments = np.einsum("kcr,cr->kc", cw.weights, x[cw.nodes])

    V = np.zeros((N, d.size))
    np.cumsum(increments, axis=1, out=V[:, 1:])
    return V


def _distances(params: OperatorParams, grid: Grid, side: str) -> np.ndarray:
    if side == "left":
        return np.array([power_difference(params.a, t, params.rho) for t in grid.points])
    return np.array([power_difference(t, params.b, params.rho) for t in grid.points])


def _check_sampled(params: OperatorParams, x: SampledFunction, N: int) -> int:
    N = _check_order(N)
    grid = x.grid
    if grid.a != params.a or grid.b != params.b:
        raise DomainError(
            f"grid spans [{grid.a}, {grid.b}] but the operator acts on "
            f"[{params.a}, {params.b}]",
            "x",
        )
    if not np.all(np.isfinite(x.values)):
        raise DomainError("sampled function has non-finite values", "x")

    return N


def compute_moments_left(
    params: OperatorParams, x: SampledFunction, N: int, rule: Rule = "quadratic"
) -> MomentFunctions:
    """Cumulative moments :math:`V_1, \\dots, V_N` on the grid of *x*.

    The integrals are accumulated in :math:`s = \\tau^\\rho` on the image
    grid :math:`s_i = t_i^\\rho`, which removes the :math:`\\tau^{\\rho - 1}`
    factor (unbounded at 0 for :math:`\\rho < 1`). See
    :func:`moment_cell_weights` for the available rules.
    """
    N = _check_sampled(params, x, N)
    d = _distances(params, x.grid, "left")
    V = _moments(d, x.values, params.rho, N, rule)
    V.setflags(write=False)

    return MomentFunctions(x.grid, V, "left")


def compute_moments_right(
    params: OperatorParams, x: SampledFunction, N: int, rule: Rule = "quadratic"
) -> MomentFunctions:
    """Cumulative moments :math:`W_1, \\dots, W_N`, accumulated from :math:`b`."""
    N = _check_sampled(params, x, N)
    d = _distances(params, x.grid, "right")
    W = _moments(d[::-1], x.values[::-1], params.rho, N, rule)[:, ::-1]
    W = np.ascontiguousarray(W)
    W.setflags(write=False)

    return MomentFunctions(x.grid, W, "right")


def scaled_moment_terms(alpha: float, d: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Evaluate ``d**(alpha - k) * V[k - 1]`` for every *k* and grid point.

    The product is defined as 0 where ``d == 0``, its limit since
    :math:`V_k = O(d^k)`. Large exponents are handled in log space.
    """
    N = V.shape[0]
    exponents = alpha - np.arange(1, N + 1)[:, None]
    result = np.zeros(V.shape)

    mask = (d > 0)[None, :] & (V != 0)
    if not np.any(mask):
        return result

    log_d = np.log(np.where(d > 0, d, 1.0))
    log_factor = exponents * log_d[None, :]
    direct = mask & (np.abs(log_factor) < _LOG_DIRECT_MAX)
    via_log = mask & ~direct

    dd = np.broadcast_to(d[None, :], V.shape)
    ee = np.broadcast_to(exponents, V.shape)
    result[direct] = dd[direct] ** ee[direct] * V[direct]
    if np.any(via_log):
        result[via_log] = np.sign(V[via_log]) * np.exp(
            log_factor[via_log] + np.log(np.abs(V[via_log]))
        )

    return result


def _series(
    params: OperatorParams,
    x: SampledFunction,
    moments: MomentFunctions,
    d: np.ndarray,
    M: float | None,
    side: str,
) -> ApproxResult:
    alpha = params.alpha
    coeffs = series_coefficients(params, moments.N)

    terms = scaled_moment_terms(alpha, d, moments.V)
    values = coeffs.A * d**alpha * x.values - coeffs.B @ terms
    values[d == 0] = 0.0
    values.setflags(write=False)

    envelope = None
    if M is not None:
        if side == "left":
            lengths = x.grid.points - params.a
        else:
            lengths = params.b - x.grid.points
        envelope = _bound(params, M, d, lengths, moments.N)
        envelope.setflags(write=False)

    return ApproxResult(x.grid, values, moments.N, envelope)


def approx_left(
    params: OperatorParams,
    x: SampledFunction,
    N: int,
    M: float | None = None,
    rule: Rule = "quadratic",
) -> ApproxResult:
    """Approximate the left integral of *x* at every grid point.

    :arg N: truncation order of the binomial series.
    :arg M: an upper bound for :math:`|\\dot x|` on :math:`[a, b]`. When
        given, :attr:`ApproxResult.error_envelope` holds the a priori bound on
        the truncation error; the (second order) moment quadrature error is
        not included.
    :arg rule: quadrature rule for the moments, see :func:`moment_cell_weights`.
    """
    moments = compute_moments_left(params, x, N, rule)
    d = _distances(params, x.grid, "left")
    return _series(params, x, moments, d, M, "left")


def approx_right(
    params: OperatorParams,
    x: SampledFunction,
    N: int,
    M: float | None = None,
    rule: Rule = "quadratic",
) -> ApproxResult:
    """Approximate the right integral of *x* at every grid point."""
    moments = compute_moments_right(params, x, N, rule)
    d = _distances(params, x.grid, "right")
    return _series(params, x, moments, d, M, "right")


def _bound(
    params: OperatorParams, M: float, d: np.ndarray, lengths: np.ndarray, N: int
) -> np.ndarray:
    if M < 0:
        raise DomainError(f"M must be nonnegative, got {M}", "M")

    alpha, rho = params.alpha, params.rho
    tail = math.exp(alpha * alpha + alpha) / (alpha * N**alpha)
    return M * rho**-alpha / gamma_fn(alpha + 1) * d**alpha * lengths * tail


def error_bound(params: OperatorParams, M: float, t: float, N: int) -> float:
    r"""A priori bound on the left truncation error at *t*.

    .. math::

        |E_N(t)| \le \frac{M \rho^{-\alpha}}{\Gamma(\alpha + 1)}
            (t^\rho - a^\rho)^\alpha (t - a)
            \frac{e^{\alpha^2 + \alpha}}{\alpha N^\alpha}

    :arg M: a bound on :math:`|\dot x|` over :math:`[a, t]`.
    """
    N = _check_order(N)
    if not params.a <= t <= params.b:
        raise DomainError(f"t={t} lies outside [{params.a}, {params.b}]", "t")

    d = np.array([power_difference(params.a, t, params.rho)])
    return float(_bound(params, M, d, np.array([t - params.a]), N)[0])
