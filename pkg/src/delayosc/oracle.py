"""Independent verification of candidate solutions.

``residual`` measures how far a candidate misses the equation pointwise.
``rk_reference`` is a separate numerical solver (RK4 by the method of
steps with Hermite history) that shares no code with the analytic path:
it never imports the trig-polynomial algebra or the fundamental solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidParameter
from .exprparse import eval_expr
from .problem import Problem

__all__ = [
    "ResidualReport",
    "KnotJump",
    "Trajectory",
    "residual",
    "knot_jumps",
    "rk_reference",
    "compare",
]

EXACT_TOL = 1e-8
FD_TOL = 1e-4


@dataclass(frozen=True)
class KnotJump:
    t: float
    value: float
    first: float
    second: float

    def as_dict(self) -> dict:
        return {"t": self.t, "x": self.value, "dx": self.first, "d2x": self.second}


@dataclass(frozen=True)
class ResidualReport:
    grid: np.ndarray
    residuals: np.ndarray
    max_residual: float
    knot_jumps: list
    mode: str  # "exact" or "fd"

    @property
    def threshold(self) -> float:
        return EXACT_TOL if self.mode == "exact" else FD_TOL


def _call(evaluator, t):
    out = evaluator(t)
    if isinstance(out, tuple):
        return tuple(np.asarray(o, dtype=float) for o in out)
    return np.asarray(out, dtype=float)


def _values(evaluator, t):
    out = _call(evaluator, t)
    return out[0] if isinstance(out, tuple) else out


def _interior_grid(problem: Problem, n: int) -> np.ndarray:
    tau = problem.tau
    frac = np.arange(1, n + 1) / (n + 1)
    return np.concatenate([(k + frac) * tau for k in range(problem.K)])


def residual(evaluator, problem: Problem, points_per_interval: int = 20,
             exact: bool | None = None) -> ResidualReport:
    """Pointwise ``|x'' + w1^2 x(t) + w2^2 x(t - tau) - f(t)|`` inside each step interval.

    ``evaluator`` maps an array of times to either ``x`` or a tuple
    ``(x, x', x'')``. With a tuple (and ``exact`` not False) the supplied
    ``x''`` is used; otherwise ``x''`` is a central difference with step
    ``1e-5 tau`` and the report carries the wider FD threshold.
    """
    if points_per_interval < 3:
        raise InvalidParameter("points_per_interval must be at least 3")
    tau = problem.tau
    t = _interior_grid(problem, points_per_interval)
    out = _call(evaluator, t)
    has_d2 = isinstance(out, tuple) and len(out) >= 3
    if exact is None:
        exact = has_d2
    if exact and not has_d2:
        raise InvalidParameter("exact mode needs an evaluator returning (x, x', x'')")
    if exact:
        x, d2x = out[0], out[2]
    else:
        x = out[0] if isinstance(out, tuple) else out
        h = 1e-5 * tau
        d2x = (_values(evaluator, t + h) - 2.0 * x + _values(evaluator, t - h)) / (h * h)
    xd = _values(evaluator, t - tau)
    res = np.abs(d2x + problem.omega1**2 * x + problem.omega2**2 * xd - eval_expr(problem.f, t))
    jumps = knot_jumps(evaluator, problem, exact=exact)
    return ResidualReport(t, res, float(res.max()), jumps, "exact" if exact else "fd")


# one-sided stencils, offsets 0..5 (second derivative) and 0..4 (first)
_D2_ONE_SIDED = np.array([15 / 4, -77 / 6, 107 / 6, -13.0, 61 / 12, -5 / 6])
_D1_ONE_SIDED = np.array([-25 / 12, 4.0, -3.0, 4 / 3, -1 / 4])


def knot_jumps(evaluator, problem: Problem, exact: bool = True) -> list:
    """Right-minus-left jumps of ``x``, ``x'``, ``x''`` at the knots ``k tau``, ``k = 0..K-1``.

    Exact mode extrapolates the evaluator's own derivatives to each side
    (``2 g(eps) - g(2 eps)``). FD mode uses fourth-order one-sided
    difference stencils of ``x`` with step ``1e-3 tau``.
    """
    tau = problem.tau
    knots = np.arange(problem.K) * tau
    jumps = []
    if exact:
        eps = 1e-6 * tau
        pts = np.concatenate([knots + eps, knots + 2 * eps, knots - eps, knots - 2 * eps])
        vals = _call(evaluator, pts)
        n = len(knots)
        for i, k in enumerate(knots):
            d = []
            for g in vals[:3]:
                right = 2 * g[i] - g[n + i]
                left = 2 * g[2 * n + i] - g[3 * n + i]
                d.append(float(right - left))
            jumps.append(KnotJump(float(k), *d))
        return jumps
    h = 1e-3 * tau
    offs = np.arange(6) * h
    for k in knots:
        right = _values(evaluator, k + offs)
        left = _values(evaluator, k - offs)
        d1 = (_D1_ONE_SIDED @ right[:5] + _D1_ONE_SIDED @ left[:5]) / h
        d2 = (_D2_ONE_SIDED @ right - _D2_ONE_SIDED @ left) / (h * h)
        # value: extrapolate the left side to the knot, compare with x(k)
        left_val = 4 * left[1] - 6 * left[2] + 4 * left[3] - left[4]
        jumps.append(KnotJump(float(k), float(right[0] - left_val), float(d1), float(d2)))
    return jumps


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray

    @property
    def h(self) -> float:
        return float(self.times[1] - self.times[0])

    def __call__(self, t):
        """Cubic Hermite interpolation of the stored samples."""
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        h = self.h
        t0, t_end = self.times[0], self.times[-1]
        if np.any(t < t0 - 1e-12 * h) or np.any(t > t_end + 1e-12 * h):
            raise InvalidParameter("time outside the integrated range")
        i = np.clip(np.floor((t - t0) / h).astype(np.intp), 0, len(self.times) - 2)
        s = (t - self.times[i]) / h
        y0, y1 = self.values[i], self.values[i + 1]
        m0, m1 = self.derivatives[i] * h, self.derivatives[i + 1] * h
        s2, s3 = s * s, s * s * s
        out = ((2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0
               + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1)
        return float(out[0]) if scalar else out


def rk_reference(problem: Problem, h: float = 1e-3) -> Trajectory:
    """Classical RK4 march over ``[0, K tau]`` with a step dividing ``tau``.

    ``h`` is rounded down to ``tau / ceil(tau / h)`` so every knot is a grid
    point. The delayed value comes from ``phi`` on the first interval and
    from cubic Hermite interpolation of stored ``(x, x')`` afterwards.
    """
    tau = problem.tau
    if not (h > 0 and h <= tau / 10):
        raise InvalidParameter(f"step h={h!r} must satisfy 0 < h <= tau/10 = {tau / 10!r}")
    m = math.ceil(tau / h - 1e-9)
    h = tau / m
    n = m * problem.K
    f_half = eval_expr(problem.f, np.arange(2 * n + 1) * (0.5 * h))
    phi_half = eval_expr(problem.phi, -tau + np.arange(2 * m + 1) * (0.5 * h))
    x0 = eval_expr(problem.phi, 0.0)
    v0 = eval_expr(problem.dphi, 0.0)
    x, v = kernels.rk4_march(problem.omega1**2, problem.omega2**2, h, m, n,
                             x0, v0, f_half, phi_half)
    times = np.arange(n + 1) * h
    return Trajectory(times, np.asarray(x), np.asarray(v))


def compare(a, b, grid) -> float:
    """Max absolute difference of two callables over ``grid``."""
    grid = np.asarray(grid, dtype=float)
    va = _values(a, grid)
    vb = _values(b, grid)
    return float(np.max(np.abs(va - vb))) if grid.size else 0.0
