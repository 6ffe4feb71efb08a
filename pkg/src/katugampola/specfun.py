"""Gamma function and generalized binomial coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from katugampola.errors import DomainError, PoleError


def gamma_fn(x: float) -> float:
    """Real Gamma function.

    Backed by :func:`math.gamma`, which is accurate to a few ulps on the
    range of arguments used here.

    :raises PoleError: at ``x`` in ``{0, -1, -2, ...}``.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}", "x")

    return math.gamma(x)


def gamma_negative(alpha: float) -> float:
    """Evaluate :math:`\\Gamma(-\\alpha)` by reflection, for non-integer ``alpha > 0``."""
    if alpha == math.floor(alpha):
        raise PoleError(f"Gamma has a pole at {-alpha}", "alpha")

    return -math.pi / (alpha * math.sin(math.pi * alpha) * gamma_fn(alpha))


@dataclass(frozen=True)
class BinomCoeffs:
    r"""Coefficients of the binomial series :math:`(1 - u)^\alpha = \sum_k c_k u^k`.

    .. math::

        c_k = \frac{\Gamma(k - \alpha)}{\Gamma(-\alpha)\, k!}
    """

    alpha: float
    coeffs: np.ndarray

    @property
    def N(self) -> int:
        return self.coeffs.size - 1


def binom_coeffs(alpha: float, N: int) -> BinomCoeffs:
    """Compute :math:`c_0, \\dots, c_N` through the recurrence
    ``c_k = c_{k - 1} (k - 1 - alpha) / k``.

    The recurrence stays finite at integer ``alpha``, where the Gamma ratio
    is of the form 0 / 0, and terminates with exact zeros there.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}", "alpha")
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N}", "N")

    c = np.empty(int(N) + 1)
    c[0] = 1.0
    for k in range(1, int(N) + 1):
        c[k] = c[k - 1] * ((k - 1 - alpha) / k)

    c.setflags(write=False)
    return BinomCoeffs(float(alpha), c)
