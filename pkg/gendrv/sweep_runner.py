import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from gendrv.errors import ConfigError, GendrvError
from gendrv.solvers import Method, PointKind, SolverConfig, Status, classify_point, solve
from gendrv.target import TargetFunction, resolve

logger = logging.getLogger(__name__)

CLUSTER_TOL = 1e-3
RECORD_COLUMNS = ["method", "x0", "status", "x_star", "y_star", "iterations"]
METHOD_ORDER = {m: i for i, m in enumerate(Method)}


class SweepSpec(BaseModel):
    """One benchmark: every method started from every point of a uniform x0 grid"""
    model_config = ConfigDict(frozen=True)

    function: str = "builtin:quartic-y"
    methods: Tuple[Method, ...] = (Method.LNR, Method.CNR)
    x0_start: float = -2.0
    x0_end: float = 13.0
    x0_count: int = Field(31, ge=1)
    config: SolverConfig = SolverConfig()

    @field_validator("methods")
    @classmethod
    def _dedupe_methods(cls, methods):
        if not methods:
            raise ValueError("at least one method is required")
        return tuple(sorted(set(methods), key=METHOD_ORDER.__getitem__))

    @model_validator(mode="after")
    def _check_range(self):
        if self.x0_start > self.x0_end:
            raise ValueError(f"x0_start ({self.x0_start}) must not exceed x0_end ({self.x0_end})")
        return self

    @classmethod
    def build(cls, **values) -> "SweepSpec":
        try:
            return cls(**{k: v for k, v in values.items() if v is not None})
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc

    def initial_guesses(self) -> List[float]:
        return [float(v) for v in np.linspace(self.x0_start, self.x0_end, self.x0_count)]

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


# Default grids for reproducing the root and extremum comparisons
ROOT_SWEEP = dict(methods=(Method.LNR, Method.CNR), x0_start=-2.0, x0_end=13.0, x0_count=31)
EXTREMUM_SWEEP = dict(methods=(Method.LG, Method.QG), x0_start=1.5, x0_end=9.5, x0_count=33)


@dataclass(frozen=True)
class SweepRecord:
    method: Method
    x0: float
    status: Status
    x_star: float
    y_star: float
    iterations: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "x0": self.x0,
            "status": self.status.value,
            "x_star": _json_float(self.x_star),
            "y_star": _json_float(self.y_star),
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepRecord":
        return cls(
            method=Method(data["method"]),
            x0=float(data["x0"]),
            status=Status(data["status"]),
            x_star=_float_or_nan(data["x_star"]),
            y_star=_float_or_nan(data["y_star"]),
            iterations=int(data["iterations"]),
        )


@dataclass(frozen=True)
class SummaryStats:
    method: Method
    n_records: int
    n_converged: int
    mean_iter: Optional[float] = None
    std_iter_population: Optional[float] = None
    std_iter_sample: Optional[float] = None
    max_iter_observed: Optional[int] = None
    distinct_limits: Tuple[Tuple[float, int], ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["method"] = self.method.value
        out["distinct_limits"] = [[c, n] for c, n in self.distinct_limits]
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SummaryStats":
        values = dict(data)
        values["method"] = Method(values["method"])
        values["distinct_limits"] = tuple((float(c), int(n)) for c, n in values["distinct_limits"])
        return cls(**values)


def _json_float(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None


def _float_or_nan(v) -> float:
    return math.nan if v is None else float(v)


def _run_point(f: TargetFunction, method: Method, x0: float, config: SolverConfig) -> SweepRecord:
    try:
        result = solve(method, f, x0, config)
    except GendrvError as exc:
        logger.warning("%s from x0=%r failed: %s", method.label, x0, exc)
        return SweepRecord(method, x0, Status.DOMAIN_ERROR, math.nan, math.nan, 0)
    if not result.converged:
        logger.warning("%s from x0=%r ended with %s after %d iterations",
                       method.label, x0, result.status.value, result.iterations)
    return SweepRecord(method, x0, result.status, result.x_star, result.y_star, result.iterations)


def run_sweep(spec: SweepSpec, target: Optional[TargetFunction] = None,
              workers: int = 1) -> List[SweepRecord]:
    """
    Run every requested method from every initial guess

    Args:
        spec: Sweep definition
        target: Pre-built target; resolved from spec.function when None
        workers: Thread count; results are identical for any value

    Returns:
        Records ordered by method, then x0

    Raises:
        ParseError: spec.function cannot be parsed
    """
    f = target if target is not None else resolve(spec.function)
    tasks = [(m, x0) for m in spec.methods for x0 in spec.initial_guesses()]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda t: _run_point(f, t[0], t[1], spec.config), tasks))
    else:
        records = [_run_point(f, m, x0, spec.config) for m, x0 in tasks]

    records.sort(key=lambda r: (METHOD_ORDER[r.method], r.x0))
    return records


def records_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    """Records as a DataFrame with RECORD_COLUMNS and plain string enums"""
    if not records:
        return pd.DataFrame(columns=RECORD_COLUMNS)
    return pd.DataFrame([r.to_dict() for r in records], columns=RECORD_COLUMNS)


def cluster_limits(values: Sequence[float], tol: float = CLUSTER_TOL) -> List[Tuple[float, int]]:
    """
    Group sorted limit points whose neighbours lie within tol

    Returns:
        (cluster centre, member count) pairs in ascending order
    """
    clusters: List[List[float]] = []
    for v in sorted(values):
        if clusters and v - clusters[-1][-1] <= tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def summarize(records: Sequence[SweepRecord]) -> List[SummaryStats]:
    """
    Per-method iteration statistics over converged runs

    Args:
        records: Output of run_sweep (or reloaded from JSON)

    Returns:
        One SummaryStats per method present; statistics are None when a
        method never converged
    """
    frame = pd.DataFrame(
        [(r.method, r.status, r.x_star, r.iterations) for r in records],
        columns=["method", "status", "x_star", "iterations"],
    )
    stats = []
    methods = sorted({r.method for r in records}, key=METHOD_ORDER.__getitem__)
    for method in methods:
        rows = frame[frame["method"] == method]
        converged = rows[rows["status"] == Status.CONVERGED]
        n = len(converged)
        if n == 0:
            stats.append(SummaryStats(method, len(rows), 0))
            continue
        iters = converged["iterations"].astype(float)
        stats.append(SummaryStats(
            method=method,
            n_records=len(rows),
            n_converged=n,
            mean_iter=float(iters.mean()),
            std_iter_population=float(iters.std(ddof=0)),
            std_iter_sample=float(iters.std(ddof=1)) if n > 1 else None,
            max_iter_observed=int(converged["iterations"].max()),
            distinct_limits=tuple(cluster_limits(converged["x_star"].tolist())),
        ))
    return stats


def stats_frame(stats: Sequence[SummaryStats]) -> pd.DataFrame:
    """Summary table for display; limits rendered as 'centre (count)'"""
    rows = []
    for s in stats:
        row = s.to_dict()
        row["method"] = s.method.label
        row["distinct_limits"] = ", ".join(f"{c:.6g} ({n})" for c, n in s.distinct_limits)
        rows.append(row)
    return pd.DataFrame(rows)


def compare_methods(stats: Sequence[SummaryStats], baseline: Method,
                    candidate: Method) -> Dict[str, Optional[float]]:
    """
    Ratios baseline/candidate of mean, max and population std of iterations

    A ratio of 5 reads "baseline needed five times more iterations".
    """
    by_method = {s.method: s for s in stats}
    base, cand = by_method.get(Method(baseline)), by_method.get(Method(candidate))

    def ratio(attr: str) -> Optional[float]:
        if base is None or cand is None:
            return None
        num, den = getattr(base, attr), getattr(cand, attr)
        if num is None or den is None or den == 0:
            return None
        return float(num) / float(den)

    return {
        "baseline": Method(baseline).value,
        "candidate": Method(candidate).value,
        "mean_ratio": ratio("mean_iter"),
        "max_ratio": ratio("max_iter_observed"),
        "std_ratio": ratio("std_iter_population"),
    }


def classify_limits(stats: SummaryStats, f: TargetFunction) -> List[Tuple[float, int, PointKind]]:
    """Second-derivative classification of each distinct limit of an extremum sweep"""
    return [(c, n, classify_point(f, c)) for c, n in stats.distinct_limits]
