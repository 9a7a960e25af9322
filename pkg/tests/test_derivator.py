import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gendrv.derivator import (
    Backend, DerivatorCoefficients, analytic_coefficients, default_delta, derivator_roots,
    evaluate_derivator, fd_coefficients, fit, vertex,
)
from gendrv.errors import DomainError, InvalidDegree, MissingTower, SingularSystem
from gendrv.target import TargetFunction, from_expression

from conftest import poly_target

SMOOTH = ["exp(x)", "sin(x) + x^2", "cos(2*x) - x^3/7", "log(x + 5)"]

coefficient = st.floats(min_value=-5, max_value=5, allow_nan=False)


def test_fd_secant_of_square():
    c = fd_coefficients(poly_target([0, 0, 1]), 1.0, 0.5, 1)
    assert c.coeffs == pytest.approx((-1.5, 2.5))
    assert c.anchor == 1.0


@pytest.mark.parametrize("x, delta", [(0.0, 0.1), (-3.0, 0.5), (7.5, 1.0), (1.0, 1e-2)])
def test_fd_reproduces_quadratic(x, delta):
    c = fd_coefficients(poly_target([1, 3, 2]), x, delta, 2)
    assert c.coeffs == pytest.approx((1.0, 3.0, 2.0), rel=1e-9, abs=1e-8)


def test_fd_quartic_near_limit():
    c = fd_coefficients(poly_target([0, 0, 0, 0, 1]), 1.0, 1e-4, 2)
    assert c.coeffs == pytest.approx((3.0, -8.0, 6.0), abs=1e-2)


def test_analytic_tangent_of_square():
    c = analytic_coefficients(poly_target([0, 0, 1]), 1.0, 1)
    assert c.coeffs == pytest.approx((-1.0, 2.0))


def test_analytic_osculating_parabola_of_quartic():
    c = analytic_coefficients(poly_target([0, 0, 0, 0, 1]), 1.0, 2)
    assert c.coeffs == pytest.approx((3.0, -8.0, 6.0))


def test_analytic_matches_fd_extrapolation():
    f = poly_target([0, 0, 0, 0, 1])
    exact = np.array(analytic_coefficients(f, 1.0, 2).coeffs)
    errors = [np.max(np.abs(np.array(fd_coefficients(f, 1.0, d, 2).coeffs) - exact))
              for d in (1e-3, 1e-4, 1e-5)]
    assert errors[-1] < 1e-3


@pytest.mark.parametrize("x", [-4.0, 0.0, 2.0, 11.0])
def test_cubic_derivator_of_cubic_is_the_cubic(cubic_target, x):
    c = analytic_coefficients(cubic_target, x, 3)
    assert c.coeffs == pytest.approx((-5.0, -2.0, 0.0, 1.0), abs=1e-9)


@pytest.mark.parametrize("coeffs, t, expected", [
    ((1.0, 3.0, 2.0), 0.0, 1.0),
    ((-1.0, 2.0), 1.0, 1.0),
    ((3.0, -8.0, 6.0), 1.0, 1.0),
])
def test_evaluate_derivator(coeffs, t, expected):
    c = DerivatorCoefficients(len(coeffs) - 1, coeffs, 0.0)
    assert evaluate_derivator(c, t) == pytest.approx(expected)


def test_invalid_degree():
    with pytest.raises(InvalidDegree):
        fd_coefficients(poly_target([0, 1]), 0.0, 0.1, 4)
    with pytest.raises(InvalidDegree):
        analytic_coefficients(poly_target([0, 1]), 0.0, 0)


def test_missing_tower():
    f = TargetFunction(eval=lambda x: x * x)
    with pytest.raises(MissingTower):
        analytic_coefficients(f, 1.0, 2)
    # the finite-difference backend still works
    assert fit(f, 1.0, 1, Backend.FD, 0.5).coeffs == pytest.approx((-1.5, 2.5))


def test_coefficient_overflow_is_a_domain_error():
    # the tower of x^60 is finite at 1.2e5 but expanding about zero overflows
    f = from_expression("x^60")
    assert math.isfinite(f(1.2e5))
    with pytest.raises(DomainError):
        analytic_coefficients(f, 1.2e5, 3)


def test_zero_spacing_is_singular():
    with pytest.raises(SingularSystem):
        fd_coefficients(poly_target([0, 1]), 1.0, 0.0, 1)


def test_spacing_lost_to_rounding_is_singular():
    # x + delta == x in double precision, so every node collapses onto x
    with pytest.raises(SingularSystem):
        fd_coefficients(poly_target([0, 1]), 1e20, 1.0, 2)


def test_coefficient_invariants():
    with pytest.raises(ValueError):
        DerivatorCoefficients(2, (1.0, 2.0), 0.0)
    with pytest.raises(ValueError):
        DerivatorCoefficients(1, (1.0, math.nan), 0.0)


def test_default_delta_scales_with_x():
    assert default_delta(0.5, 1) == pytest.approx(1e-6)
    assert default_delta(-200.0, 1) == pytest.approx(2e-4)
    assert default_delta(0.0, 3) > default_delta(0.0, 2) > default_delta(0.0, 1)


def test_derivator_roots_and_vertex():
    assert derivator_roots(DerivatorCoefficients(1, (-4.0, 2.0), 0.0)) == [2.0]
    assert derivator_roots(DerivatorCoefficients(2, (-4.0, 0.0, 1.0), 0.0)) == pytest.approx([-2.0, 2.0])
    assert derivator_roots(DerivatorCoefficients(2, (1.0, 0.0, 1.0), 0.0)) == []
    assert derivator_roots(DerivatorCoefficients(3, (-6.0, 11.0, -6.0, 1.0), 0.0)) == pytest.approx([1, 2, 3])
    assert vertex(DerivatorCoefficients(2, (1.0, 3.0, 2.0), 0.0)) == pytest.approx((-0.75, -0.125))


@settings(max_examples=200, deadline=None)
@given(
    name=st.sampled_from(SMOOTH),
    x=st.floats(min_value=-2, max_value=2),
    delta=st.floats(min_value=1e-6, max_value=1.0),
    degree=st.sampled_from([1, 2, 3]),
)
def test_interpolates_at_nodes(name, x, delta, degree):
    f = from_expression(name)
    c = fd_coefficients(f, x, delta, degree)
    for j in range(degree + 1):
        t = x + j * delta
        assert math.isclose(evaluate_derivator(c, t), f(t), rel_tol=1e-8, abs_tol=1e-8)


@settings(max_examples=200, deadline=None)
@given(
    degree=st.sampled_from([1, 2, 3]),
    coeffs=st.lists(coefficient, min_size=4, max_size=4),
    x=st.floats(min_value=-1, max_value=1),
    delta=st.floats(min_value=0.5, max_value=1.0),
)
def test_exact_for_low_degree_polynomials(degree, coeffs, x, delta):
    own = coeffs[: degree + 1]
    f = poly_target(own)
    for c in (fd_coefficients(f, x, delta, degree), analytic_coefficients(f, x, degree)):
        assert c.coeffs == pytest.approx(tuple(own), rel=1e-9, abs=1e-8)


@pytest.mark.parametrize("name", SMOOTH)
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_fd_converges_to_analytic(name, degree):
    f = from_expression(name)
    exact = np.array(analytic_coefficients(f, 0.5, degree).coeffs)
    distances = [
        np.max(np.abs(np.array(fd_coefficients(f, 0.5, d, degree).coeffs) - exact))
        for d in (1e-1, 1e-2, 1e-3)
    ]
    assert distances[1] <= 1.1 * distances[0]
    assert distances[2] <= 1.1 * distances[1]


@pytest.mark.parametrize("name", SMOOTH)
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_tangency_order(name, degree):
    f = from_expression(name)
    x = 0.5
    c = analytic_coefficients(f, x, degree)

    def gap(h):
        return abs(f(x + h) - evaluate_derivator(c, x + h))

    big, small = 1e-2, 1e-3
    constant = gap(big) / big ** (degree + 1)
    assert gap(small) <= 2.0 * constant * small ** (degree + 1) + 1e-13
