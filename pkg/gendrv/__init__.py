"""Generalized-derivative root and extremum finders with a benchmark harness."""

from gendrv.cubic_solver import Cubic, CubicRoots, closest_real_root, solve_cubic
from gendrv.derivator import (
    Backend, DerivatorCoefficients, analytic_coefficients, evaluate_derivator, fd_coefficients,
)
from gendrv.expression import Jet3, eval_jet, parse
from gendrv.solvers import Method, SolverConfig, SolverResult, Status, c_nr, l_g, l_nr, q_g, q_nr, solve
from gendrv.sweep_runner import SweepSpec, run_sweep, summarize
from gendrv.target import TargetFunction, from_expression, resolve

__version__ = "0.1.0"
