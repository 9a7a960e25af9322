import numpy as np
import pytest
from scipy.optimize import brentq

from gendrv.target import builtin, from_expression, from_polynomial


def quartic_prime(x):
    return 4 * x ** 3 - 63 * x ** 2 + 298 * x - 419


@pytest.fixture
def quartic():
    return builtin("quartic-y")


@pytest.fixture(scope="session")
def quartic_critical_points():
    """Critical points of the test quartic refined by bisection on y'"""
    return [brentq(quartic_prime, lo, hi, xtol=1e-14) for lo, hi in [(2, 3), (4, 6), (8, 9)]]


@pytest.fixture
def cubic_target():
    return from_expression("x^3 - 2*x - 5")


def poly_target(coeffs):
    """Target for power-basis coefficients (c0, c1, ...)"""
    return from_polynomial(np.asarray(coeffs, dtype=float))
