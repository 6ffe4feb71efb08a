"""Katugampola fractional integrals.

Closed forms for power functions (:mod:`katugampola.exact`), a desingularized
quadrature oracle (:mod:`katugampola.oracle`), the truncated-series
approximation in terms of ordinary moments (:mod:`katugampola.approx`) and a
solver for :math:`I^{\\alpha,\\rho}_{0+} x + x = f` built on it
(:mod:`katugampola.solver`).
"""

from katugampola.approx import (
    ApproxResult,
    MomentFunctions,
    SeriesCoefficients,
    approx_left,
    approx_right,
    compute_moments_left,
    compute_moments_right,
    error_bound,
    series_coefficients,
)
from katugampola.core import (
    Grid,
    OperatorParams,
    SampledFunction,
    make_params,
    make_uniform_grid,
    sample,
)
from katugampola.errors import (
    ConsistencyError,
    DomainError,
    KatugampolaError,
    PoleError,
    SingularPivotError,
    ToleranceNotReached,
)
from katugampola.exact import (
    PowerFunction,
    exact_left_power,
    exact_right_power,
    exact_testfn_integral,
)
from katugampola.oracle import QuadratureSettings, oracle_left, oracle_right
from katugampola.solver import (
    IntegralEquationProblem,
    SolverSolution,
    manufactured_problem,
    paper_problem,
    solve_integral_equation,
)
from katugampola.specfun import BinomCoeffs, binom_coeffs, gamma_fn

__all__ = [
    "ApproxResult",
    "BinomCoeffs",
    "ConsistencyError",
    "DomainError",
    "Grid",
    "IntegralEquationProblem",
    "KatugampolaError",
    "MomentFunctions",
    "OperatorParams",
    "PoleError",
    "PowerFunction",
    "QuadratureSettings",
    "SampledFunction",
    "SeriesCoefficients",
    "SingularPivotError",
    "SolverSolution",
    "ToleranceNotReached",
    "approx_left",
    "approx_right",
    "binom_coeffs",
    "compute_moments_left",
    "compute_moments_right",
    "error_bound",
    "exact_left_power",
    "exact_right_power",
    "exact_testfn_integral",
    "gamma_fn",
    "make_params",
    "make_uniform_grid",
    "manufactured_problem",
    "oracle_left",
    "oracle_right",
    "paper_problem",
    "sample",
    "series_coefficients",
    "solve_integral_equation",
]
