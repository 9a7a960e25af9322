"""Generalized Derivative coefficients for linear, quadratic and cubic derivators.

A degree-k derivator at x is the polynomial through (x + j*delta, f(x + j*delta)),
j = 0..k. Its coefficients in the power basis are the generalized derivatives;
as delta -> 0 they tend to the expansion of the osculating polynomial at x.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import linalg

from gendrv.cubic_solver import Cubic, solve_cubic
from gendrv.errors import DomainError, InvalidDegree, MissingTower, SingularSystem
from gendrv.target import TargetFunction

logger = logging.getLogger(__name__)

DEGREES = (1, 2, 3)

# forward k-th differences amplify round-off roughly as delta**-k
_DEFAULT_DELTA_SCALE = {1: 1e-6, 2: 1e-4, 3: 1e-3}


class Backend(str, Enum):
    ANALYTIC = "analytic"
    FD = "fd"


@dataclass(frozen=True)
class DerivatorCoefficients:
    """Power-basis coefficients (a0, ..., a_degree) fitted at `anchor`"""
    degree: int
    coeffs: Tuple[float, ...]
    anchor: float

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(
                f"Degree {self.degree} derivator needs {self.degree + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError(f"Derivator coefficients must be finite: {self.coeffs}")

    def __getitem__(self, k: int) -> float:
        return self.coeffs[k]

    def __call__(self, t: float) -> float:
        return evaluate_derivator(self, t)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "anchor": self.anchor, "coeffs": list(self.coeffs)}


def _check_degree(degree: int):
    if degree not in DEGREES:
        raise InvalidDegree(degree)


def default_delta(x: float, degree: int) -> float:
    """Finite-difference spacing used when the caller does not supply one"""
    _check_degree(degree)
    return _DEFAULT_DELTA_SCALE[degree] * max(1.0, abs(x))


def _expand_about(shifted: Sequence[float], x: float) -> np.ndarray:
    """Re-expand sum c_k (t - x)^k into the power basis in t"""
    result = np.array([shifted[-1]], dtype=np.float64)
    for c in reversed(shifted[:-1]):
        result = P.polyadd(P.polymul(result, [-x, 1.0]), [c])
    out = np.zeros(len(shifted))
    out[: result.size] = result
    return out


def fd_coefficients(f: TargetFunction, x: float, delta: float, degree: int) -> DerivatorCoefficients:
    """
    Fit the degree-k derivator through forward nodes x, x+delta, ..., x+k*delta

    Args:
        f: Target function (only point evaluation is used)
        x: Anchor point
        delta: Node spacing, non-zero
        degree: 1, 2 or 3

    Returns:
        DerivatorCoefficients interpolating f at all k+1 nodes

    Raises:
        InvalidDegree: degree outside {1, 2, 3}
        SingularSystem: the shifted Vandermonde system cannot be solved
    """
    _check_degree(degree)
    if delta == 0.0 or not math.isfinite(delta):
        raise SingularSystem(f"Node spacing must be finite and non-zero, got {delta}")

    nodes = np.array([x + j * delta for j in range(degree + 1)], dtype=np.float64)
    samples = np.array([f(t) for t in nodes], dtype=np.float64)

    # solve on (t - x)/delta so the matrix stays close to the integer Vandermonde
    scaled = (nodes - x) / delta
    vander = np.vander(scaled, degree + 1, increasing=True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", linalg.LinAlgWarning)
            scaled_coeffs = linalg.solve(vander, samples)
    except (linalg.LinAlgError, linalg.LinAlgWarning, ValueError) as exc:
        raise SingularSystem(f"Vandermonde solve failed at x={x}, delta={delta}: {exc}") from exc

    shifted = [scaled_coeffs[k] / delta ** k for k in range(degree + 1)]
    coeffs = _expand_about(shifted, x)
    if not np.all(np.isfinite(coeffs)):
        raise SingularSystem(f"Non-finite coefficients at x={x}, delta={delta}")
    return DerivatorCoefficients(degree, tuple(float(c) for c in coeffs), float(x))


def analytic_coefficients(f: TargetFunction, x: float, degree: int) -> DerivatorCoefficients:
    """
    Exact delta -> 0 limit: the osculating polynomial of degree k at x

    Args:
        f: Target function with a derivative tower
        x: Anchor point
        degree: 1, 2 or 3

    Returns:
        DerivatorCoefficients, e.g. for degree 2
        a2 = y''/2, a1 = y' - x*y'', a0 = y - x*y' + x^2*y''/2

    Raises:
        MissingTower: f has no derivative tower
        InvalidDegree: degree outside {1, 2, 3}
        DomainError: non-finite tower or coefficient overflow
    """
    _check_degree(degree)
    if not f.has_tower:
        raise MissingTower(f"Target '{f.name}' has no derivative tower; use the fd backend")
    y, d1, d2, d3 = f.tower(x)
    shifted = [y, d1, d2 / 2.0, d3 / 6.0][: degree + 1]
    if not all(math.isfinite(c) for c in shifted):
        raise DomainError(f"Non-finite derivative tower for '{f.name}' at x={x}")
    coeffs = _expand_about(shifted, x)
    if not np.all(np.isfinite(coeffs)):
        raise DomainError(f"Derivator coefficients of '{f.name}' overflow at x={x}")
    return DerivatorCoefficients(degree, tuple(float(c) for c in coeffs), float(x))


def evaluate_derivator(c: DerivatorCoefficients, t: float) -> float:
    """Horner evaluation of sum a_k t^k"""
    result = 0.0
    for a in reversed(c.coeffs):
        result = result * t + a
    return result


def fit(f: TargetFunction, x: float, degree: int,
        backend: Backend = Backend.ANALYTIC, delta: Optional[float] = None) -> DerivatorCoefficients:
    """
    Coefficients from the requested backend

    Args:
        f: Target function
        x: Anchor point
        degree: Derivator degree
        backend: ANALYTIC (osculating limit) or FD (finite spacing)
        delta: Spacing for FD; default_delta(x, degree) when None

    Returns:
        DerivatorCoefficients
    """
    if Backend(backend) is Backend.ANALYTIC:
        return analytic_coefficients(f, x, degree)
    step = delta if delta is not None else default_delta(x, degree)
    return fd_coefficients(f, x, step, degree)


def derivator_roots(c: DerivatorCoefficients) -> List[float]:
    """
    Real roots of a derivator polynomial, ascending

    Lower-order fallbacks apply when the leading coefficient vanishes for
    degrees 1 and 2; degree 3 defers to the cubic solver and propagates
    DegenerateCubic.
    """
    coeffs = c.coeffs
    if c.degree == 3:
        return list(solve_cubic(Cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0])).real_roots)
    if c.degree == 2 and coeffs[2] != 0.0:
        a0, a1, a2 = coeffs
        disc = a1 * a1 - 4.0 * a2 * a0
        if disc < 0.0:
            return []
        # cancellation-free form of the quadratic formula
        q = -0.5 * (a1 + math.copysign(math.sqrt(disc), a1))
        if q == 0.0:
            return [0.0]
        return sorted({q / a2, a0 / q})
    a0, a1 = coeffs[0], coeffs[1]
    if a1 == 0.0:
        return []
    return [-a0 / a1]


def vertex(c: DerivatorCoefficients) -> Tuple[float, float]:
    """
    Vertex of a quadratic derivator

    Returns:
        (x_v, y_v) with x_v = -a1/(2 a2) and y_v = -(a1^2 - 4 a2 a0)/(4 a2)
    """
    if c.degree != 2:
        raise InvalidDegree(c.degree)
    a0, a1, a2 = c.coeffs
    return -a1 / (2.0 * a2), -(a1 * a1 - 4.0 * a2 * a0) / (4.0 * a2)
