import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIGURE1_PAIRS
from katugampola.approx import (
    approx_left,
    approx_right,
    compute_moments_left,
    compute_moments_right,
    error_bound,
    moment_cell_weights,
    scaled_moment_terms,
    series_coefficients,
)
from katugampola.core import SampledFunction, make_params, make_uniform_grid, sample
from katugampola.errors import DomainError
from katugampola.exact import exact_left_power, exact_right_power, exact_testfn_integral
from katugampola.oracle import oracle_left

# 30-digit values (mpmath)
A_HALF = 0.423142187660817215211059588671
B1_HALF = -0.564189583547756286948079451561
B2_HALF = -0.28209479177387814347403972578
BOUND_HALF = 0.534147159103265855608652088663


def figure_setup(alpha, rho, n=501):
    p = make_params(alpha, rho, 0.0, 0.5)
    g = make_uniform_grid(0.0, 0.5, n)
    x = SampledFunction(g, g.points ** (2 * rho))
    exact = np.array([exact_testfn_integral(p, t) for t in g.points])
    return p, g, x, exact


# {{{ coefficients


@pytest.mark.parametrize("N", [1, 2, 7])
def test_coefficients_alpha_one(N):
    c = series_coefficients(make_params(1.0, 1.0, 0.0, 1.0), N)
    assert c.A == 0
    assert c.B[0] == -1
    assert np.all(c.B[1:] == 0)


def test_coefficients_half():
    c = series_coefficients(make_params(0.5, 1.0, 0.0, 1.0), 2)
    assert c.A == pytest.approx(A_HALF, rel=1e-14)
    assert c.B == pytest.approx([B1_HALF, B2_HALF], rel=1e-14)


def test_coefficient_A_decays():
    p = make_params(0.9, 0.2, 0.0, 0.5)
    assert abs(series_coefficients(p, 100).A) < abs(series_coefficients(p, 10).A)


@pytest.mark.parametrize("alpha", [0.3, 1.7, 2.5])
def test_coefficients_match_gamma_form(alpha):
    rho = 1.3
    c = series_coefficients(make_params(alpha, rho, 0.0, 1.0), 15)
    g_neg = -math.pi / (alpha * math.sin(math.pi * alpha) * math.gamma(alpha))
    for k in range(1, 16):
        expected = (
            rho ** (1 - alpha) * math.gamma(k - alpha)
            / (math.gamma(alpha + 1) * g_neg * math.factorial(k - 1))
        )
        assert c.B[k - 1] == pytest.approx(expected, rel=1e-10)


def test_coefficients_reject_bad_order():
    with pytest.raises(DomainError):
        series_coefficients(make_params(1.0, 1.0, 0.0, 1.0), 0)


# }}}

# {{{ moments


@pytest.mark.parametrize("rule", ["trapezoid", "quadratic"])
def test_moments_examples(rule):
    p = make_params(0.5, 1.0, 0.0, 0.5)
    g = make_uniform_grid(0.0, 0.5, 501)

    V = compute_moments_left(p, SampledFunction(g, np.zeros(501)), 4, rule).V
    assert np.all(V == 0)

    V = compute_moments_left(p, SampledFunction(g, np.ones(501)), 1, rule).V
    assert np.allclose(V[0], g.points, rtol=1e-13, atol=1e-15)

    V = compute_moments_left(p, sample(lambda t: t**2, g), 1, rule).V
    assert V[0, -1] == pytest.approx(1 / 24, abs=1e-6)


def test_moments_second_order_trapezoid():
    p = make_params(0.5, 1.7, 0.0, 1.0)
    errors = []
    for n in (101, 201, 401):
        g = make_uniform_grid(0.0, 1.0, n)
        V = compute_moments_left(p, sample(np.exp, g), 3, "trapezoid").V
        # (1 / rho) int_0^1 s^2 exp(s^(1 / rho)) ds, mpmath at 30 digits
        errors.append(abs(V[2, -1] - 0.456558993086799547927766696499))
    rates = np.log2(np.array(errors[:-1]) / errors[1:])
    assert np.all(rates > 1.8)


def test_moments_quadratic_exact_for_quadratics_in_s():
    # x(tau) = tau^(2 rho) is s^2: the product rule integrates it exactly
    for alpha, rho in FIGURE1_PAIRS:
        p, g, x, _ = figure_setup(alpha, rho, 51)
        V = compute_moments_left(p, x, 10).V
        s = g.points**rho
        k = np.arange(1, 11)[:, None]
        expected = s[None, :] ** (k + 2) / ((k + 2) * rho)
        assert np.allclose(V, expected, rtol=1e-11, atol=1e-300)


def test_moments_monotone_for_nonnegative_x():
    p = make_params(0.5, 0.4, 0.2, 1.0)
    g = make_uniform_grid(0.2, 1.0, 101)
    x = sample(lambda t: np.sin(7 * t) ** 2, g)
    for rule in ("trapezoid", "quadratic"):
        V = compute_moments_left(p, x, 6, rule).V
        assert np.all(V[:, 0] == 0)
        assert np.all(np.diff(V, axis=1) >= 0)

        W = compute_moments_right(p, x, 6, rule).V
        assert np.all(W[:, -1] == 0)
        assert np.all(np.diff(W, axis=1) <= 0)


def test_moments_reject_mismatched_grid():
    p = make_params(0.5, 1.0, 0.0, 1.0)
    x = sample(np.cos, make_uniform_grid(0.0, 0.5, 11))
    with pytest.raises(DomainError):
        compute_moments_left(p, x, 2)


def test_unknown_rule():
    with pytest.raises(DomainError):
        moment_cell_weights(np.linspace(0, 1, 5), 2, 1.0, "simpson")


def test_scaled_terms_extreme_exponents():
    # d^(alpha - k) overflows and V underflows, their product is moderate
    d = np.array([0.0, 1e-7, 0.5])
    V = np.array([[0.0, 1e-300, 0.25]])
    terms = scaled_moment_terms(0.5 + 42, d, V)
    assert terms[0, 0] == 0
    assert terms[0, 1] == pytest.approx(1e-300 * 1e-7**42.5, rel=1e-12)
    assert terms[0, 2] == pytest.approx(0.25 * 0.5**42.5, rel=1e-14)

    # denormal moment times an overflowing power
    terms = scaled_moment_terms(0.5 - 62, d, np.array([[0.0, 5e-324, 0.0]]))
    assert terms[0, 1] == pytest.approx(math.exp(math.log(5e-324) + 62.5 * math.log(1e7)), rel=1e-3)


# }}}

# {{{ approximation


def test_alpha_one_is_cumulative_integral():
    p = make_params(1.0, 1.0, 0.0, 1.0)
    g = make_uniform_grid(0.0, 1.0, 201)
    x = sample(np.cos, g)

    values = approx_left(p, x, 5, rule="trapezoid").values
    trapezoid = np.concatenate([[0], np.cumsum(0.5 * g.spacing * (x.values[1:] + x.values[:-1]))])
    assert np.allclose(values, trapezoid, rtol=1e-14, atol=0)

    values = approx_left(p, x, 5).values
    assert np.allclose(values, np.sin(g.points), atol=1e-7)


def test_alpha_one_right():
    p = make_params(1.0, 1.0, 0.0, 1.0)
    g = make_uniform_grid(0.0, 1.0, 201)
    values = approx_right(p, sample(np.cos, g), 3).values
    assert np.allclose(values, np.sin(1.0) - np.sin(g.points), atol=1e-7)


def test_zero_function():
    p = make_params(0.7, 0.6, 0.1, 1.0)
    g = make_uniform_grid(0.1, 1.0, 31)
    x = SampledFunction(g, np.zeros(31))
    assert np.all(approx_left(p, x, 8).values == 0)
    assert np.all(approx_right(p, x, 8).values == 0)


def test_left_against_closed_form():
    p = make_params(0.5, 1.0, 0.0, 0.5)
    g = make_uniform_grid(0.0, 0.5, 1001)
    result = approx_left(p, sample(lambda t: t**2, g), 50, M=1.0)
    exact = np.array([exact_left_power(p, 2, t) for t in g.points])
    assert np.all(np.abs(result.values - exact) <= result.error_envelope + 10 * g.spacing**2)


def test_right_against_closed_form():
    p = make_params(0.5, 2.0, 0.0, 1.0)
    g = make_uniform_grid(0.0, 1.0, 1001)
    # |d/dt (1 - t^2)| <= 2
    result = approx_right(p, sample(lambda t: 1 - t**2, g), 50, M=2.0)
    exact = np.array([exact_right_power(p, 1, t) for t in g.points])
    assert result.values[-1] == 0
    assert np.all(np.abs(result.values - exact) <= result.error_envelope + 10 * g.spacing**2)


@pytest.mark.parametrize("alpha, rho", FIGURE1_PAIRS)
def test_convergence_in_N(alpha, rho):
    p, g, x, exact = figure_setup(alpha, rho)
    errors = [np.max(np.abs(approx_left(p, x, N).values - exact)) for N in (4, 8, 16, 32, 64)]
    assert all(e1 > e2 for e1, e2 in zip(errors, errors[1:]))

    # observed rate at least half of N^-alpha
    for e1, e2 in zip(errors[1:4], errors[2:5]):
        assert math.log2(e1 / e2) >= 0.5 * alpha


@pytest.mark.parametrize("alpha, rho", FIGURE1_PAIRS)
def test_envelope_dominance(alpha, rho):
    p, g, x, exact = figure_setup(alpha, rho)
    t = g.points[1:]
    M = np.max(2 * rho * t ** (2 * rho - 1))

    for N in (4, 16, 64):
        result = approx_left(p, x, N, M)
        assert np.all(np.abs(result.values - exact) <= result.error_envelope + 10 * g.spacing**2)


def test_oracle_agreement_cos():
    p = make_params(0.7, 1.3, 0.0, 0.5)
    g = make_uniform_grid(0.0, 0.5, 501)
    result = approx_left(p, sample(np.cos, g), 60, M=math.sin(0.5))
    for t in (0.1, 0.25, 0.5):
        i = int(round(t / g.spacing))
        reference = oracle_left(p, np.cos, t)
        assert abs(result.values[i] - reference) <= result.error_envelope[i] + 1e-4


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 2.5), st.integers(1, 30))
def test_left_right_mirror(alpha, N):
    p = make_params(alpha, 1.0, 0.0, 1.0)
    g = make_uniform_grid(0.0, 1.0, 101)
    x = sample(lambda t: np.cosh(t - 0.5), g)
    left = approx_left(p, x, N).values
    right = approx_right(p, x, N).values
    assert np.allclose(right, left[::-1], rtol=1e-12, atol=1e-14)


def test_envelope_absent_without_M():
    p, g, x, _ = figure_setup(0.9, 0.2, 11)
    assert approx_left(p, x, 3).error_envelope is None


def test_non_finite_samples_rejected():
    p, g, _, _ = figure_setup(0.9, 0.2, 11)
    values = np.ones(11)
    values[0] = np.inf
    with pytest.raises(DomainError):
        approx_left(p, SampledFunction(g, values), 3)


# }}}

# {{{ error bound


def test_error_bound_examples():
    p = make_params(0.5, 1.0, 0.0, 1.0)
    assert error_bound(p, 1.0, 0.0, 10) == 0
    assert error_bound(p, 1.0, 0.5, 10) == pytest.approx(BOUND_HALF, rel=1e-14)

    p = make_params(1.7, 0.6, 0.2, 1.0)
    ratio = error_bound(p, 2.0, 0.8, 16) / error_bound(p, 2.0, 0.8, 1)
    assert ratio == pytest.approx(16**-1.7, rel=1e-14)

    with pytest.raises(DomainError):
        error_bound(p, -1.0, 0.8, 4)


@given(st.floats(0.05, 3), st.floats(0.05, 3), st.integers(1, 1000))
def test_error_bound_decreasing(alpha, rho, N):
    p = make_params(alpha, rho, 0.0, 1.0)
    assert error_bound(p, 1.0, 0.7, N + 1) < error_bound(p, 1.0, 0.7, N)


# }}}
