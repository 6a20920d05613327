"""Reference computations shared by the tests."""

import math

import numpy as np


def free_kernel(omega1, v):
    """``sin(w1 v) / w1``, or ``v`` when ``w1 == 0``."""
    if omega1 == 0.0:
        return v
    return np.sin(omega1 * v) / omega1


def step_by_quadrature(ps, k, t, nodes=64):
    """Piece ``k`` at global times ``t`` in ``[(k-1) tau, k tau)`` from the
    variation-of-constants integral over the previous piece.

    ``x(t) = x(t0) cos w1 (t - t0) + x'(t0) sin w1 (t - t0) / w1
             - w2^2 int_{t0}^{t} sin w1 (t - s) / w1 x(s - tau) ds``

    with ``t0 = (k - 1) tau``. Value and slope are the left limits at ``t0``
    and the delayed values come from ``ps`` at Gauss nodes, so only piece
    ``k - 1`` is read.
    """
    tau, w1, w2 = ps.tau, ps.omega1, ps.omega2
    t = np.atleast_1d(np.asarray(t, dtype=float))
    t0 = (k - 1) * tau
    left = np.nextafter(t0, -np.inf)
    x0, v0 = ps(left), ps(left, 1)
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        half = 0.5 * (ti - t0)
        s = t0 + half * (xg + 1.0)
        integral = half * np.sum(wg * free_kernel(w1, ti - s) * ps(s - tau))
        out[i] = x0 * math.cos(w1 * (ti - t0)) + v0 * free_kernel(w1, ti - t0) - w2 * w2 * integral
    return out


def random_expression(rng, depth=5):
    """Random expression tree of depth at most ``depth`` over ``t``.

    Denominators are kept away from zero (``2 + sin(.)`` or ``1 + (.)^2``)
    and ``exp`` only sees a bounded argument, so every tree is finite on
    moderate ``t``.
    """
    from delayosc.exprparse import BinOp, Const, Func, Neg, Pow, Var

    if depth == 0 or rng.integers(4) == 0:
        if rng.integers(2):
            return Var()
        return Const(float(rng.choice([0.25, 0.5, 1.0, 1.5, 2.0, 3.0])))
    kind = rng.choice(["+", "-", "*", "/", "neg", "pow", "sin", "cos", "exp"])
    sub = lambda: random_expression(rng, depth - 1)  # noqa: E731
    if kind in ("+", "-", "*"):
        return BinOp(str(kind), sub(), sub())
    if kind == "/":
        den = BinOp("+", Const(2.0), Func("sin", sub())) if rng.integers(2) \
            else BinOp("+", Const(1.0), Pow(sub(), 2))
        return BinOp("/", sub(), den)
    if kind == "neg":
        return Neg(sub())
    if kind == "pow":
        return Pow(sub(), int(rng.integers(0, 4)))
    if kind == "exp":
        return Func("exp", Func("sin", sub()))
    return Func(str(kind), sub())
