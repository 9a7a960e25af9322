import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from gendrv.errors import DomainError, ParseError
from gendrv.expression import eval_jet, evaluate, parse

Tower = Tuple[float, float, float, float]

BUILTIN_PREFIX = "builtin:"


@dataclass(frozen=True)
class TargetFunction:
    """
    Scalar function under study

    `tower`, when present, returns (y, y', y'', y''') at a point and its
    first component agrees with `eval`.
    """
    eval: Callable[[float], float]
    tower: Optional[Callable[[float], Tower]] = None
    name: str = "f"

    @property
    def has_tower(self) -> bool:
        return self.tower is not None

    def __call__(self, x: float) -> float:
        y = self.eval(x)
        if not math.isfinite(y):
            raise DomainError(f"{self.name} is not finite at x={x}")
        return y


def from_expression(text: str) -> TargetFunction:
    """
    Build a target with an exact derivative tower from expression text

    Args:
        text: Expression in x

    Returns:
        TargetFunction backed by plain and jet evaluation of the parsed AST
    """
    node = parse(text)
    return TargetFunction(
        eval=lambda x: evaluate(node, x),
        tower=lambda x: eval_jet(node, x).as_tuple(),
        name=text,
    )


def from_polynomial(coeffs, name: str = "polynomial") -> TargetFunction:
    """
    Build a target from power-basis coefficients (c0, c1, ...)

    Derivatives come from numpy's polynomial differentiation, so the
    tower is exact up to floating point.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    derivs = [c, P.polyder(c, 1), P.polyder(c, 2), P.polyder(c, 3)]

    def _eval(x: float) -> float:
        return float(P.polyval(x, c))

    def _tower(x: float) -> Tower:
        y, d1, d2, d3 = (float(P.polyval(x, d)) if d.size else 0.0 for d in derivs)
        return (y, d1, d2, d3)

    return TargetFunction(eval=_eval, tower=_tower, name=name)


# x^4 - 21x^3 + 149x^2 - 419x + 290: roots 1 and 10, three interior extrema
QUARTIC_Y = (290.0, -419.0, 149.0, -21.0, 1.0)

_BUILTINS: Dict[str, Callable[[], TargetFunction]] = {
    "quartic-y": lambda: from_polynomial(QUARTIC_Y, name="quartic-y"),
}


def builtin_names():
    return sorted(_BUILTINS)


def builtin(name: str) -> TargetFunction:
    """Look up a registered builtin target by name"""
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ParseError(0, "one of builtin:" + ", builtin:".join(builtin_names()), name) from None


def resolve(spec: str) -> TargetFunction:
    """
    Turn a CLI/app function argument into a target

    Args:
        spec: Either "builtin:<name>" or an expression in x

    Returns:
        Matching TargetFunction
    """
    spec = spec.strip()
    if spec.startswith(BUILTIN_PREFIX):
        return builtin(spec[len(BUILTIN_PREFIX):])
    return from_expression(spec)
