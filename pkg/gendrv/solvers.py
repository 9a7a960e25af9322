"""Iterative root and extremum finders built on derivator functions.

Root finding:   L-NR (tangent line), C-NR (cubic derivator), Q-NR (quadratic derivator)
Extrema:        L-G (fixed-step gradient), Q-G (vertex of the quadratic derivator)

All methods share one stopping rule, |x_n - x_{n-1}| <= tol, checked after
every update, and report failures through SolverResult.status instead of
raising.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from gendrv.cubic_solver import Cubic, closest_real_root, solve_cubic
from gendrv.derivator import Backend, derivator_roots, fit, vertex
from gendrv.errors import ConfigError, DegenerateCubic, DomainError, GendrvError, SingularSystem
from gendrv.target import TargetFunction

logger = logging.getLogger(__name__)

ZERO_DERIVATIVE_EPS = 1e-14
FLAT_CURVATURE_EPS = 1e-12
DIVERGENCE_LIMIT = 1e12


class Method(str, Enum):
    LNR = "l-nr"
    CNR = "c-nr"
    QNR = "q-nr"
    LG = "l-g"
    QG = "q-g"

    @property
    def label(self) -> str:
        return self.value.upper()


ROOT_METHODS = (Method.LNR, Method.CNR, Method.QNR)
EXTREMUM_METHODS = (Method.LG, Method.QG)


class Direction(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max-iter-exceeded"
    NO_REAL_ROOT = "no-real-root"
    ZERO_DERIVATIVE = "zero-derivative"
    DEGENERATE_CURVATURE = "degenerate-curvature"
    DOMAIN_ERROR = "domain-error"


class PointKind(str, Enum):
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    FLAT = "flat"


class SolverConfig(BaseModel):
    """Shared solver settings; stopping rule is |x_n - x_(n-1)| <= tol"""
    model_config = ConfigDict(frozen=True, use_enum_values=False)

    tol: float = Field(1e-4, gt=0)
    max_iter: int = Field(200, ge=1)
    step_a: float = Field(0.05, gt=0)
    backend: Backend = Backend.ANALYTIC
    delta: Optional[float] = Field(None, gt=0)
    direction: Direction = Direction.MINIMIZE

    @classmethod
    def build(cls, **values) -> "SolverConfig":
        """Validate keyword settings, dropping None values so defaults apply"""
        try:
            return cls(**{k: v for k, v in values.items() if v is not None})
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class TraceStep:
    n: int
    x: float
    y: float
    # value predicted by the derivator at this iterate (Q-G vertex ordinate)
    y_model: Optional[float] = None
    note: str = ""


@dataclass
class IterationTrace:
    method: Method
    steps: List[TraceStep] = field(default_factory=list)
    diverged: bool = False

    def record(self, x: float, y: float, y_model: Optional[float] = None, note: str = ""):
        self.steps.append(TraceStep(len(self.steps), x, y, y_model, note))

    def to_list(self) -> List[dict]:
        return [
            {"n": s.n, "x": s.x, "y": s.y, "y_model": s.y_model, "note": s.note}
            for s in self.steps
        ]


@dataclass
class SolverResult:
    status: Status
    x_star: float
    y_star: float
    iterations: int
    trace: IterationTrace
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_dict(self, include_trace: bool = False) -> dict:
        out = {
            "method": self.trace.method.value,
            "status": self.status.value,
            "x_star": self.x_star,
            "y_star": self.y_star,
            "iterations": self.iterations,
            "message": self.message,
        }
        if include_trace:
            out["trace"] = self.trace.to_list()
            out["diverged"] = self.trace.diverged
        return out


class _StepFailure(Exception):
    """Raised inside an update rule to stop the iteration with a status"""

    def __init__(self, status: Status, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


# An update rule maps (f, x_n, y_n, cfg) to (x_{n+1}, y_model, note)
UpdateRule = Callable[[TargetFunction, float, float, SolverConfig], Tuple[float, Optional[float], str]]


def _iterate(method: Method, update: UpdateRule, f: TargetFunction, x0: float,
             cfg: SolverConfig) -> SolverResult:
    trace = IterationTrace(method)
    x = float(x0)
    try:
        y = f(x)
    except GendrvError as exc:
        trace.record(x, math.nan, note=str(exc))
        return SolverResult(Status.DOMAIN_ERROR, x, math.nan, 0, trace, str(exc))
    trace.record(x, y)

    iterations = 0
    while iterations < cfg.max_iter:
        try:
            x_next, y_model, note = update(f, x, y, cfg)
        except _StepFailure as failure:
            logger.debug("%s stopped at x=%r: %s", method.label, x, failure.message)
            return SolverResult(failure.status, x, y, iterations, trace, failure.message)
        except (DomainError, SingularSystem) as exc:
            return SolverResult(Status.DOMAIN_ERROR, x, y, iterations, trace, str(exc))

        if not math.isfinite(x_next) or abs(x_next) > DIVERGENCE_LIMIT:
            trace.diverged = True
            return SolverResult(
                Status.MAX_ITER_EXCEEDED, x, y, iterations, trace,
                f"Iterate left |x| <= {DIVERGENCE_LIMIT:g} after step {iterations}",
            )
        iterations += 1
        try:
            y_next = f(x_next)
        except GendrvError as exc:
            trace.record(x_next, math.nan, y_model, note or str(exc))
            return SolverResult(Status.DOMAIN_ERROR, x_next, math.nan, iterations, trace, str(exc))
        trace.record(x_next, y_next, y_model, note)

        step = abs(x_next - x)
        x, y = x_next, y_next
        if step <= cfg.tol:
            return SolverResult(Status.CONVERGED, x, y, iterations, trace)

    return SolverResult(
        Status.MAX_ITER_EXCEEDED, x, y, iterations, trace,
        f"No convergence within {cfg.max_iter} iterations",
    )


def _slope(f: TargetFunction, x: float, cfg: SolverConfig) -> float:
    return fit(f, x, 1, cfg.backend, cfg.delta)[1]


def _newton_step(f: TargetFunction, x: float, y: float, cfg: SolverConfig) -> float:
    slope = _slope(f, x, cfg)
    if abs(slope) < ZERO_DERIVATIVE_EPS * (1.0 + abs(y)):
        raise _StepFailure(Status.ZERO_DERIVATIVE, f"Derivative vanishes at x={x!r}")
    return x - y / slope


def _lnr_update(f, x, y, cfg):
    return _newton_step(f, x, y, cfg), 0.0, ""


def _quadratic_root_step(f, x, cfg) -> Optional[float]:
    roots = derivator_roots(fit(f, x, 2, cfg.backend, cfg.delta))
    if not roots:
        return None
    return min(roots, key=lambda r: (abs(r - x), r))


def _cnr_update(f, x, y, cfg):
    c = fit(f, x, 3, cfg.backend, cfg.delta)
    try:
        roots = solve_cubic(Cubic(c[3], c[2], c[1], c[0]))
        return closest_real_root(roots, x), 0.0, ""
    except DegenerateCubic:
        logger.debug("C-NR: cubic term vanishes at x=%r, trying quadratic derivator", x)
    root = _quadratic_root_step(f, x, cfg)
    if root is not None:
        return root, 0.0, "fallback:quadratic"
    logger.debug("C-NR: quadratic derivator has no real root at x=%r, taking L-NR step", x)
    return _newton_step(f, x, y, cfg), 0.0, "fallback:linear"


def _qnr_update(f, x, y, cfg):
    root = _quadratic_root_step(f, x, cfg)
    if root is None:
        raise _StepFailure(Status.NO_REAL_ROOT, f"Quadratic derivator has no real root at x={x!r}")
    return root, 0.0, ""


def _lg_update(f, x, y, cfg):
    sign = -1.0 if Direction(cfg.direction) is Direction.MINIMIZE else 1.0
    return x + sign * cfg.step_a * _slope(f, x, cfg), None, ""


def _qg_update(f, x, y, cfg):
    c = fit(f, x, 2, cfg.backend, cfg.delta)
    if abs(c[2]) < FLAT_CURVATURE_EPS * (1.0 + abs(c[1])):
        raise _StepFailure(Status.DEGENERATE_CURVATURE, f"Quadratic derivator is flat at x={x!r}")
    x_v, y_v = vertex(c)
    return x_v, y_v, ""


def l_nr(f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """
    Classical Newton-Raphson, x_{n+1} = x_n - y_n / y'_n

    Args:
        f: Target function
        x0: Initial guess
        cfg: Solver settings (tol, max_iter, backend)

    Returns:
        SolverResult; ZERO_DERIVATIVE when |y'| < 1e-14 (1 + |y|)
    """
    return _iterate(Method.LNR, _lnr_update, f, x0, cfg)


def c_nr(f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """
    Cubic Newton-Raphson: jump to the real root of the cubic derivator
    closest to x_n. A vanishing cubic term falls back to the quadratic
    derivator, then to an L-NR step; the fallback is noted in the trace.
    """
    return _iterate(Method.CNR, _cnr_update, f, x0, cfg)


def q_nr(f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """
    Quadratic Newton-Raphson: closest real root of the quadratic derivator.
    Stops with NO_REAL_ROOT when that parabola misses the axis.
    """
    return _iterate(Method.QNR, _qnr_update, f, x0, cfg)


def l_g(f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """Fixed-step gradient descent (or ascent for Direction.MAXIMIZE)"""
    return _iterate(Method.LG, _lg_update, f, x0, cfg)


def q_g(f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """
    Quadratic Gradient: move to the vertex of the quadratic derivator

    No step size and no direction; the trace carries the vertex ordinate
    as y_model for every update.
    """
    return _iterate(Method.QG, _qg_update, f, x0, cfg)


_SOLVERS = {
    Method.LNR: l_nr,
    Method.CNR: c_nr,
    Method.QNR: q_nr,
    Method.LG: l_g,
    Method.QG: q_g,
}


def solve(method, f: TargetFunction, x0: float, cfg: SolverConfig = SolverConfig()) -> SolverResult:
    """Dispatch to the solver named by `method` (Method or its string value)"""
    return _SOLVERS[Method(method)](f, x0, cfg)


def second_derivative(f: TargetFunction, x: float) -> float:
    if f.has_tower:
        return f.tower(x)[2]
    h = 1e-4 * max(1.0, abs(x))
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def classify_point(f: TargetFunction, x: float, flat_tol: float = 1e-8) -> PointKind:
    """
    Classify a critical point by the sign of y''

    Args:
        f: Target function
        x: Critical point
        flat_tol: |y''| below this is reported as FLAT

    Returns:
        PointKind.MINIMUM, MAXIMUM or FLAT
    """
    curvature = second_derivative(f, x)
    if abs(curvature) <= flat_tol:
        return PointKind.FLAT
    return PointKind.MINIMUM if curvature > 0 else PointKind.MAXIMUM
