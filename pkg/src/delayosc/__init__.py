"""Exact method-of-steps solver for ``x'' + w1^2 x(t) + w2^2 x(t - tau) = f(t)``."""

__version__ = "0.1.0"

from .cauchy import Solution, eval_solution, evaluate, forcing_integral, history_integral, solve
from .errors import (
    DelayOscError,
    EvalError,
    ExpressionError,
    ExprSyntaxError,
    FrequencyMismatch,
    InvalidParameter,
    OutOfHorizon,
    UnknownIdentifier,
)
from .fundamental import Kind, PiecewiseSolution, build_fundamental, delay_cosine, delay_sine, eval_piecewise
from .problem import ForcingKernel, Problem
from .quadrature import QuadratureConfig

__all__ = [
    "Solution", "eval_solution", "evaluate", "forcing_integral", "history_integral", "solve",
    "DelayOscError", "EvalError", "ExpressionError", "ExprSyntaxError", "FrequencyMismatch",
    "InvalidParameter", "OutOfHorizon", "UnknownIdentifier",
    "Kind", "PiecewiseSolution", "build_fundamental", "delay_cosine", "delay_sine",
    "eval_piecewise", "ForcingKernel", "Problem", "QuadratureConfig",
]
