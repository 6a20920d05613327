"""Cauchy problem for the delayed oscillator assembled from fundamental solutions.

For ``t > 0`` the solution is ::

    x(t) = phi(-tau) x1(t) + phi'(-tau) x2(t)
           + int_{-tau}^{0} k(t - tau - s) g(s) ds
           + int_{0}^{t}    k(t - tau - s) f(s) ds

where ``k`` is the sine-type kernel (``Kind.KERNEL``, equal to ``x2`` when
``omega1 == 0``) and ``g = phi'' + omega1^2 rho`` with
``rho(s) = phi(s) - phi(-tau) - phi'(-tau) (s + tau)``. When ``omega1 == 0``
the correction vanishes and ``g = phi''``. The two alternative
representations selected by :class:`ForcingKernel` are kept for comparison.

Integrals use fixed-order Gauss-Legendre on panels split wherever the
kernel argument crosses a knot, so every panel integrand is smooth.
Derivatives are exact: they differentiate the kernel under the integral
and add the boundary terms of the variable upper limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfHorizon
from .exprparse import eval_expr
from .fundamental import Kind, PiecewiseSolution, build_fundamental, eval_piecewise
from .problem import ForcingKernel, Problem
from .quadrature import QuadratureConfig, composite_nodes, panel_breaks
from .trigpoly import derivative

__all__ = [
    "Solution",
    "solve",
    "eval_solution",
    "evaluate",
    "history_integral",
    "forcing_integral",
]


@dataclass(frozen=True)
class Solution:
    problem: Problem
    x1: PiecewiseSolution
    x2: PiecewiseSolution
    kernel: PiecewiseSolution
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __call__(self, t):
        """``(x, x', x'')`` at ``t``; this is the evaluator the oracle expects."""
        return evaluate(self, t)

    @property
    def history_kernel(self) -> PiecewiseSolution:
        if self.problem.forcing_kernel is ForcingKernel.X2_LITERAL:
            return self.x2
        return self.kernel

    @property
    def forcing_kernel(self) -> PiecewiseSolution:
        fk = self.problem.forcing_kernel
        if fk is ForcingKernel.X1_LITERAL:
            return self.x1
        if fk is ForcingKernel.X2_LITERAL:
            return self.x2
        return self.kernel


def solve(problem: Problem, quadrature: QuadratureConfig | None = None) -> Solution:
    """Build ``x1``, ``x2`` and the kernel for ``problem``; nothing is sampled."""
    p = problem
    x1 = build_fundamental(Kind.X1, p.omega1, p.omega2, p.tau, p.K)
    x2 = build_fundamental(Kind.X2, p.omega1, p.omega2, p.tau, p.K)
    kernel = x2 if p.omega1 == 0.0 else build_fundamental(Kind.KERNEL, p.omega1, p.omega2, p.tau, p.K)
    return Solution(p, x1, x2, kernel, quadrature or QuadratureConfig())


def _history_weight(sol: Solution, s: np.ndarray) -> np.ndarray:
    p = sol.problem
    g = eval_expr(p.d2phi, s)
    if p.omega1 != 0.0 and p.forcing_kernel is not ForcingKernel.X2_LITERAL:
        a = eval_expr(p.phi, -p.tau)
        b = eval_expr(p.dphi, -p.tau)
        rho = eval_expr(p.phi, s) - a - b * (s + p.tau)
        g = g + p.omega1**2 * rho
    return g


def _integrals(sol, t, lo_fn, hi_fn, kernel, weight_fn, extra, orders):
    """``int_{lo(t)}^{hi(t)} kernel^(n)(t - tau - s) w(s) ds`` for each order n."""
    tau = sol.problem.tau
    breaks = [panel_breaks(lo_fn(ti), hi_fn(ti), ti, tau, extra) for ti in t]
    owner, s, w = composite_nodes(breaks, sol.quadrature.nodes_per_panel)
    out = {}
    if s.size == 0:
        return {n: np.zeros_like(t) for n in orders}
    u = t[owner] - tau - s
    ws = w * weight_fn(s)
    for n in orders:
        vals = eval_piecewise(kernel, u, n)
        out[n] = np.bincount(owner, weights=ws * vals, minlength=len(t))
    return out


def _split(sol: Solution, t):
    scalar = np.ndim(t) == 0
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    p = sol.problem
    if np.any(ta < -p.tau) or np.any(ta >= p.horizon):
        bad = float(ta[(ta < -p.tau) | (ta >= p.horizon)][0])
        raise OutOfHorizon(f"t={bad!r} outside [-tau, K*tau) = [{-p.tau!r}, {p.horizon!r})")
    return scalar, ta


def history_integral(sol: Solution, t, order: int = 0, extra_breaks=()):
    """History term (or its ``order``-th derivative) at ``t > 0``."""
    scalar, ta = _split(sol, t)
    tau = sol.problem.tau
    res = _integrals(
        sol, ta, lambda _: -tau, lambda _: 0.0, sol.history_kernel,
        lambda s: _history_weight(sol, s), extra_breaks, (order,),
    )[order]
    return float(res[0]) if scalar else res


def forcing_integral(sol: Solution, t, order: int = 0, extra_breaks=()):
    """Forcing convolution (or its ``order``-th derivative) at ``t > 0``."""
    scalar, ta = _split(sol, t)
    res = _forcing(sol, ta, (order,), extra_breaks)[order]
    return float(res[0]) if scalar else res


def _forcing(sol, ta, orders, extra):
    p = sol.problem
    kern = sol.forcing_kernel
    res = _integrals(
        sol, ta, lambda _: 0.0, lambda ti: ti, kern,
        lambda s: eval_expr(p.f, s), extra, orders,
    )
    if 1 in orders or 2 in orders:
        # boundary terms from the moving upper limit s = t, where the kernel
        # argument is -tau (right limit of the prelude)
        pre = kern.local_piece(0)
        k0 = pre(0.0)
        k1 = derivative(pre)(0.0)
        fval = eval_expr(p.f, ta)
        if 1 in orders:
            res[1] = res[1] + k0 * fval
        if 2 in orders:
            res[2] = res[2] + k1 * fval + (k0 * eval_expr(p.df, ta) if k0 != 0.0 else 0.0)
    return res


def evaluate(sol: Solution, t, orders=(0, 1, 2), extra_breaks=()):
    """Values of the solution and its exact derivatives.

    Returns a tuple with one entry per requested order (floats for scalar
    ``t``, arrays otherwise). On ``[-tau, 0]`` the history and its symbolic
    derivatives are returned directly.
    """
    scalar, ta = _split(sol, t)
    p = sol.problem
    hist_exprs = (p.phi, p.dphi, p.d2phi)
    out = {n: np.empty_like(ta) for n in orders}
    neg = ta <= 0.0
    pos = ~neg
    if neg.any():
        for n in orders:
            out[n][neg] = eval_expr(hist_exprs[n], ta[neg])
    if pos.any():
        tp = ta[pos]
        a = eval_expr(p.phi, -p.tau)
        b = eval_expr(p.dphi, -p.tau)
        tau = p.tau
        hist = _integrals(
            sol, tp, lambda _: -tau, lambda _: 0.0, sol.history_kernel,
            lambda s: _history_weight(sol, s), extra_breaks, orders,
        )
        forc = _forcing(sol, tp, orders, extra_breaks)
        for n in orders:
            lead = 0.0
            if a != 0.0:
                lead = lead + a * eval_piecewise(sol.x1, tp, n)
            if b != 0.0:
                lead = lead + b * eval_piecewise(sol.x2, tp, n)
            out[n][pos] = lead + hist[n] + forc[n]
    if scalar:
        return tuple(float(out[n][0]) for n in orders)
    return tuple(out[n] for n in orders)


def eval_solution(sol: Solution, t):
    """Solution value at ``t`` in ``[-tau, K tau)``."""
    (x,) = evaluate(sol, t, orders=(0,))
    return x
