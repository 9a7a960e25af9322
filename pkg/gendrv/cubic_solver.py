import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from gendrv.errors import DegenerateCubic

DEGENERACY_EPS = 1e-12
ZERO_DISCRIMINANT_EPS = 1e-12


class DiscriminantCase(str, Enum):
    POSITIVE = "PositiveDiscriminant"
    ZERO = "ZeroDiscriminant"
    NEGATIVE = "NegativeDiscriminant"


@dataclass(frozen=True)
class Cubic:
    """a*x^3 + b*x^2 + c*x + d"""
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c, self.d)):
            raise ValueError(f"Cubic coefficients must be finite: {self}")

    @property
    def scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __call__(self, x: float) -> float:
        return ((self.a * x + self.b) * x + self.c) * x + self.d

    def derivative(self, x: float) -> float:
        return (3.0 * self.a * x + 2.0 * self.b) * x + self.c


@dataclass(frozen=True)
class DepressedCubic:
    """t^3 + p*t + q with x = t - shift"""
    p: float
    q: float
    shift: float = 0.0

    def __call__(self, t: float) -> float:
        return (t * t + self.p) * t + self.q


@dataclass(frozen=True)
class CubicRoots:
    real_roots: Tuple[float, ...]
    case: DiscriminantCase
    multiplicities: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "real_roots": list(self.real_roots),
            "multiplicities": list(self.multiplicities),
            "case": self.case.value,
        }


def _cbrt(v: float) -> float:
    return float(np.cbrt(v))


def _polish(func, deriv, root: float) -> float:
    """One Newton step, kept only when it does not increase the residual"""
    slope = deriv(root)
    if slope == 0.0 or not math.isfinite(slope):
        return root
    candidate = root - func(root) / slope
    if math.isfinite(candidate) and abs(func(candidate)) <= abs(func(root)):
        return candidate
    return root


def depress(c: Cubic) -> DepressedCubic:
    """
    Remove the quadratic term with x = t - b/(3a)

    Args:
        c: Source cubic

    Returns:
        DepressedCubic with p = (3ac - b^2)/(3a^2),
        q = (2b^3 - 9abc + 27a^2 d)/(27a^3), shift = b/(3a)

    Raises:
        DegenerateCubic: |a| <= 1e-12 * max(|a|, |b|, |c|, |d|)
    """
    a, b, cc, d = c.a, c.b, c.c, c.d
    if abs(a) <= DEGENERACY_EPS * c.scale:
        raise DegenerateCubic(f"Leading coefficient {a} is negligible for {c}")
    p = (3.0 * a * cc - b * b) / (3.0 * a * a)
    q = (2.0 * b ** 3 - 9.0 * a * b * cc + 27.0 * a * a * d) / (27.0 * a ** 3)
    return DepressedCubic(p=p, q=q, shift=b / (3.0 * a))


def discriminant(dc: DepressedCubic) -> float:
    """(q/2)^2 + (p/3)^3"""
    return (dc.q / 2.0) ** 2 + (dc.p / 3.0) ** 3


def classify(dc: DepressedCubic) -> DiscriminantCase:
    delta = discriminant(dc)
    tolerance = ZERO_DISCRIMINANT_EPS * (1.0 + (dc.q / 2.0) ** 2 + abs(dc.p / 3.0) ** 3)
    if abs(delta) <= tolerance:
        return DiscriminantCase.ZERO
    return DiscriminantCase.POSITIVE if delta > 0 else DiscriminantCase.NEGATIVE


def solve_depressed(dc: DepressedCubic) -> CubicRoots:
    """
    Real roots of t^3 + p*t + q

    Args:
        dc: Depressed cubic

    Returns:
        CubicRoots in t (shift not applied), sorted ascending
    """
    p, q = dc.p, dc.q
    case = classify(dc)

    def deriv(t: float) -> float:
        return 3.0 * t * t + p

    if case is DiscriminantCase.POSITIVE:
        s = math.sqrt(discriminant(dc))
        root = _cbrt(-q / 2.0 + s) + _cbrt(-q / 2.0 - s)
        return CubicRoots((_polish(dc, deriv, root),), case, (1,))

    if case is DiscriminantCase.ZERO:
        if p == 0.0:
            return CubicRoots((_cbrt(-q),), case, (3,))
        single = 3.0 * q / p
        double = -3.0 * q / (2.0 * p)
        if single == double:
            return CubicRoots((single,), case, (3,))
        # the double root sits on a flat tangent, so Newton polish does not apply
        pairs = sorted([(_polish(dc, deriv, single), 1), (double, 2)])
        return CubicRoots(tuple(r for r, _ in pairs), case, tuple(m for _, m in pairs))

    amplitude = 2.0 * math.sqrt(-p / 3.0)
    cos_arg = float(np.clip(3.0 * q / p * math.sqrt(-3.0 / p) / 2.0, -1.0, 1.0))
    phi = math.acos(cos_arg) / 3.0
    roots = sorted(
        _polish(dc, deriv, amplitude * math.cos(phi - 2.0 * math.pi * k / 3.0)) for k in range(3)
    )
    return CubicRoots(tuple(roots), case, (1, 1, 1))


def solve_cubic(c: Cubic) -> CubicRoots:
    """
    Real roots of a general cubic via depression and Cardano's formulas

    Args:
        c: Cubic with non-negligible leading coefficient

    Returns:
        CubicRoots in x, sorted ascending, each root polished once more
        against the original coefficients

    Raises:
        DegenerateCubic: propagated from depress()
    """
    dc = depress(c)
    t_roots = solve_depressed(dc)
    pairs = []
    for t, mult in zip(t_roots.real_roots, t_roots.multiplicities):
        x = t - dc.shift
        if mult == 1:
            x = _polish(c, c.derivative, x)
        pairs.append((x, mult))
    pairs.sort()
    return CubicRoots(
        tuple(x for x, _ in pairs), t_roots.case, tuple(m for _, m in pairs)
    )


def closest_real_root(roots: CubicRoots, x_ref: float) -> float:
    """
    Root nearest to x_ref; ties go to the smaller root

    Args:
        roots: Non-empty root set
        x_ref: Reference point, usually the current iterate

    Returns:
        Selected root
    """
    if not roots.real_roots:
        raise ValueError("Root set is empty")
    return min(roots.real_roots, key=lambda r: (abs(r - x_ref), r))
