r"""Closed-form Katugampola integrals of power functions.

For :math:`x(t) = (t^\rho - a^\rho)^v` and :math:`v > -1`

.. math::

    I^{\alpha,\rho}_{a+} x(t) =
        \frac{\rho^{-\alpha} \Gamma(v + 1)}{\Gamma(\alpha + v + 1)}
        (t^\rho - a^\rho)^{\alpha + v},

and symmetrically for :math:`y(t) = (b^\rho - t^\rho)^v` on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from katugampola.core import OperatorParams
from katugampola.errors import DomainError
from katugampola.specfun import gamma_fn

Side = Literal["left", "right"]


@dataclass(frozen=True)
class PowerFunction:
    """The power family :math:`(t^\\rho - a^\\rho)^v` (left) or
    :math:`(b^\\rho - t^\\rho)^v` (right)."""

    v: float
    side: Side = "left"

    def __post_init__(self) -> None:
        if not self.v > -1:
            raise DomainError(f"v must be greater than -1, got {self.v}", "v")
        if self.side not in ("left", "right"):
            raise DomainError(f"side must be 'left' or 'right', got {self.side!r}", "side")

    def __call__(self, params: OperatorParams, t: float) -> float:
        if self.side == "left":
            base = power_difference(params.a, t, params.rho)
        else:
            base = power_difference(t, params.b, params.rho)
        if base == 0.0 and self.v < 0:
            return math.inf
        return base**self.v

    def integral(self, params: OperatorParams, t: float) -> float:
        if self.side == "left":
            return exact_left_power(params, self.v, t)
        return exact_right_power(params, self.v, t)


def power_difference(lo: float, hi: float, rho: float) -> float:
    """Evaluate :math:`hi^\\rho - lo^\\rho` for ``0 <= lo <= hi``.

    Uses :func:`math.expm1` when the powers are close, so that the difference
    stays accurate for ``rho`` near zero.
    """
    if hi <= lo:
        return 0.0
    if lo == 0 or hi > 2 * lo:
        return hi**rho - lo**rho

    return lo**rho * math.expm1(rho * math.log(hi / lo))


def _check(params: OperatorParams, v: float, t: float) -> None:
    if not v > -1:
        raise DomainError(f"v must be greater than -1, got {v}", "v")
    if not params.a <= t <= params.b:
        raise DomainError(f"t={t} lies outside [{params.a}, {params.b}]", "t")


def _power_integral(alpha: float, rho: float, v: float, d: float) -> float:
    if d == 0.0:
        # alpha + v <= 0 is possible for v < 0: the integral blows up there
        return 0.0 if alpha + v > 0 else math.inf

    log_scale = (
        -alpha * math.log(rho)
        + math.lgamma(v + 1)
        - math.lgamma(alpha + v + 1)
        + (alpha + v) * math.log(d)
    )
    if abs(log_scale) < 600:
        return rho**-alpha * gamma_fn(v + 1) / gamma_fn(alpha + v + 1) * d ** (alpha + v)

    return math.exp(log_scale)


def exact_left_power(params: OperatorParams, v: float, t: float) -> float:
    """Left integral of :math:`x(\\tau) = (\\tau^\\rho - a^\\rho)^v` at *t*.

    :raises DomainError: if ``v <= -1`` or *t* is outside :math:`[a, b]`.
    """
    _check(params, v, t)
    d = power_difference(params.a, t, params.rho)
    return _power_integral(params.alpha, params.rho, v, d)


def exact_right_power(params: OperatorParams, v: float, t: float) -> float:
    """Right integral of :math:`y(\\tau) = (b^\\rho - \\tau^\\rho)^v` at *t*."""
    _check(params, v, t)
    d = power_difference(t, params.b, params.rho)
    return _power_integral(params.alpha, params.rho, v, d)


def exact_testfn_integral(params: OperatorParams, t: float) -> float:
    r"""Left integral of :math:`x(t) = t^{2\rho}` from :math:`a = 0`.

    .. math::

        I^{\alpha,\rho}_{0+} x(t) = \frac{2 \rho^{-\alpha}}{\Gamma(\alpha + 3)}
            t^{\rho(\alpha + 2)}
    """
    if params.a != 0:
        raise DomainError(f"the test function integral needs a = 0, got {params.a}", "a")
    if not 0 <= t <= params.b:
        raise DomainError(f"t={t} lies outside [0, {params.b}]", "t")

    alpha, rho = params.alpha, params.rho
    if t == 0:
        return 0.0

    return 2.0 * rho**-alpha / gamma_fn(alpha + 3) * t ** (rho * (alpha + 2))
