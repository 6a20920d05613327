"""Fundamental solutions of ``x'' + w1^2 x(t) + w2^2 x(t - tau) = 0``.

The solutions are built by the method of steps. On the step interval
``[(k-1) tau, k tau)`` the delayed term is the already known previous
piece, so each step is a constant-coefficient oscillator with a forcing
that lies in the trig-polynomial algebra. It is solved exactly with
``solve_particular`` plus a free oscillation matching value and slope at
the left knot.

Pieces are stored in *local* time ``u = t - (i - 1) tau`` (piece 0 is the
prelude on ``[-tau, 0)``). Keeping ``u`` in ``[0, tau)`` avoids the
cancellation a global monomial basis suffers at large ``t``. Global-time
segments are available through :meth:`PiecewiseSolution.segment`.

The trig-polynomial basis is badly conditioned when ``omega1`` is small
but nonzero: the particular solution carries powers of ``1/omega1`` that
cancel against the free oscillation. Each solution therefore also carries
a power-series form of the same pieces, built from the step equation by
the Taylor recurrence on sub-panels of length ``h <= 1/max(omega1, omega2)``.
Evaluation uses the trig-polynomial tables when their cancellation factor
(sum of absolute term sizes over the largest value) is at most
``CANCELLATION_LIMIT`` and the power series otherwise.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidParameter, OutOfHorizon
from .trigpoly import (
    TrigPoly,
    add,
    derivative,
    homogeneous_with_ic,
    scale,
    shift,
    solve_particular,
)

__all__ = [
    "Kind",
    "PiecewiseSolution",
    "build_fundamental",
    "eval_piecewise",
    "delay_cosine",
    "delay_sine",
    "MAX_INTERVALS",
    "WARN_INTERVALS",
    "TAYLOR_DEGREE",
    "CANCELLATION_LIMIT",
]

MAX_INTERVALS = 64
WARN_INTERVALS = 32
TAYLOR_DEGREE = 24
CANCELLATION_LIMIT = 10.0


class Kind(enum.Enum):
    """Which initial function the prelude carries.

    ``X1`` is the constant 1 and ``X2`` the ramp ``t + tau``. ``KERNEL`` is
    the free oscillation ``sin(w1 (t + tau)) / w1`` (the ramp when
    ``w1 == 0``): it starts from rest at ``-tau`` with unit slope and
    satisfies the equation on the prelude as well, which makes
    ``KERNEL(t - tau - s)`` the impulse response used in the Cauchy
    integrals.
    """

    X1 = "x1"
    X2 = "x2"
    KERNEL = "kernel"


def _pack(pieces, ncoef):
    n = len(pieces)
    P = np.zeros((n, ncoef))
    Q = np.zeros((n, ncoef))
    R = np.zeros((n, ncoef))
    for i, tp in enumerate(pieces):
        for arr, poly in ((P, tp.p), (Q, tp.q), (R, tp.r)):
            c = poly.coeffs
            arr[i, : len(c)] = c
    return P, Q, R


@dataclass(frozen=True)
class TaylorTables:
    """Power-series form of the pieces.

    Row ``k * m + j`` holds the Taylor coefficients of piece ``k`` about the
    local time ``j * h``; ``orders[n]`` is the table of the ``n``-th derivative.
    """

    m: int
    h: float
    orders: tuple


@dataclass(frozen=True)
class PiecewiseSolution:
    kind: Kind
    tau: float
    omega1: float
    omega2: float
    pieces: tuple[TrigPoly, ...]
    taylor: TaylorTables | None = field(default=None, repr=False, compare=False)
    evaluation: str = "symbolic"
    cancellation: float = 1.0
    _tables: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.evaluation not in ("symbolic", "taylor"):
            raise InvalidParameter(f"unknown evaluation {self.evaluation!r}")
        if self.evaluation == "taylor" and self.taylor is None:
            raise InvalidParameter("taylor evaluation needs Taylor tables")
        derivs = [self.pieces]
        for _ in range(2):
            derivs.append(tuple(derivative(tp) for tp in derivs[-1]))
        ncoef = max(1, max(tp.degree() + 1 for d in derivs for tp in d))
        object.__setattr__(self, "_tables", tuple(_pack(d, ncoef) for d in derivs))

    @property
    def K(self) -> int:
        return len(self.pieces) - 1

    @property
    def horizon(self) -> float:
        return self.K * self.tau

    @property
    def prelude(self) -> TrigPoly:
        """Initial function on ``[-tau, 0)`` in global time."""
        return self.segment(0)

    @property
    def segments(self) -> list[TrigPoly]:
        """Global-time segments; entry ``k - 1`` is valid on ``[(k-1) tau, k tau)``."""
        return [self.segment(k) for k in range(1, self.K + 1)]

    def segment(self, k: int) -> TrigPoly:
        """Piece ``k`` re-expressed in global time (``k = 0`` is the prelude)."""
        return shift(self.pieces[k], -(k - 1) * self.tau)

    def local_piece(self, k: int) -> TrigPoly:
        return self.pieces[k]

    def __call__(self, t, order: int = 0):
        return eval_piecewise(self, t, order)

    def derivatives(self, t):
        """``(x, x', x'')`` at ``t``; the evaluator shape the oracle expects."""
        return tuple(eval_piecewise(self, t, n) for n in (0, 1, 2))


def _check_params(omega1, omega2, tau):
    if not (tau > 0 and math.isfinite(tau)):
        raise InvalidParameter(f"tau must be positive, got {tau!r}")
    for name, w in (("omega1", omega1), ("omega2", omega2)):
        if not (w >= 0 and math.isfinite(w)):
            raise InvalidParameter(f"{name} must be non-negative, got {w!r}")


def _prelude(kind: Kind, omega1: float) -> TrigPoly:
    if kind is Kind.X1:
        return TrigPoly.pure([1.0])
    if kind is Kind.X2:
        return TrigPoly.pure([0.0, 1.0])
    return homogeneous_with_ic(omega1, 0.0, 1.0, 0.0)


def step(prev: TrigPoly, omega1: float, omega2: float, tau: float) -> TrigPoly:
    """Next piece in local time from the previous one.

    Solves ``y'' + w1^2 y = -w2^2 prev(u)`` on ``[0, tau)`` with ``y`` and
    ``y'`` at ``u = 0`` equal to ``prev`` and ``prev'`` at ``u = tau``.
    """
    rhs = scale(prev, -omega2 * omega2)
    part = solve_particular(rhs, omega1)
    dprev = derivative(prev)
    dpart = derivative(part)
    y0 = prev(tau) - part(0.0)
    y0p = dprev(tau) - dpart(0.0)
    return add(homogeneous_with_ic(omega1, y0, y0p, 0.0), part)


def _poly_deriv(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    out = np.zeros_like(rows)
    out[:, : n - 1] = rows[:, 1:] * np.arange(1, n)
    return out


def _taylor_tables(prelude: TrigPoly, omega1, omega2, tau, K, N=TAYLOR_DEGREE) -> TaylorTables:
    lam = max(omega1, omega2)
    m = max(1, math.ceil(lam * tau))
    h = tau / m
    starts = np.arange(m) * h
    # prelude: derivatives of the closed form at each sub-panel start
    rows = np.zeros((m, N + 1))
    d = prelude
    fact = 1.0
    for n in range(N + 1):
        rows[:, n] = d(starts) / fact
        d = derivative(d)
        fact *= n + 1
    w1sq, w2sq = omega1 * omega1, omega2 * omega2
    # free oscillations with unit value / unit slope at the expansion point
    C = np.zeros(N + 1)
    S = np.zeros(N + 1)
    C[0] = S[1] = 1.0
    for n in range(N - 1):
        C[n + 2] = -w1sq * C[n] / ((n + 1) * (n + 2))
        S[n + 2] = -w1sq * S[n] / ((n + 1) * (n + 2))
    hp = h ** np.arange(N + 1)
    dhp = np.arange(N + 1) * np.concatenate([[0.0], hp[:-1]])
    table = [rows]
    y, yp = float(rows[-1] @ hp), float(rows[-1] @ dhp)
    for _ in range(K):
        prev = table[-1]
        part = np.zeros((m, N + 1))
        for n in range(N - 1):
            part[:, n + 2] = -(w1sq * part[:, n] + w2sq * prev[:, n]) / ((n + 1) * (n + 2))
        rows = np.empty_like(part)
        for j in range(m):
            rows[j] = part[j] + y * C + yp * S
            y, yp = float(rows[j] @ hp), float(rows[j] @ dhp)
        table.append(rows)
    c0 = np.ascontiguousarray(np.vstack(table))
    c1 = _poly_deriv(c0)
    c2 = _poly_deriv(c1)
    return TaylorTables(m, h, (c0, c1, c2))


def _cancellation(pieces, taylor: TaylorTables, tau) -> float:
    """Largest ratio of summed term sizes to value size, over pieces and orders 0-2."""
    m, h = taylor.m, taylor.h
    N = taylor.orders[0].shape[1] - 1
    vp = np.vstack([np.zeros(N + 1), (0.5 * h) ** np.arange(N + 1), h ** np.arange(N + 1)])
    worst = 1.0
    derivs = list(pieces)
    for order in range(3):
        vals = np.abs(taylor.orders[order] @ vp.T).reshape(len(pieces), m * 3)
        for k in range(1, len(pieces)):
            tp = derivs[k]
            powers = tau ** np.arange(tp.degree() + 1)
            terms = sum(
                float(np.abs(np.asarray(poly.coeffs)) @ powers[: len(poly.coeffs)])
                for poly in (tp.p, tp.q, tp.r) if poly.coeffs
            )
            size = float(vals[k].max())
            if terms == 0.0:
                continue
            worst = max(worst, terms / size if size > 0.0 else math.inf)
        derivs = [derivative(tp) for tp in derivs]
    return worst


def build_fundamental(kind, omega1: float, omega2: float, tau: float, K: int,
                      evaluation: str = "auto") -> PiecewiseSolution:
    """Method-of-steps construction of ``x1``, ``x2`` or the Cauchy kernel on ``[-tau, K tau)``.

    ``evaluation`` picks the numeric form: ``"symbolic"`` (trig-polynomial
    tables), ``"taylor"`` (power series) or ``"auto"`` (symbolic unless its
    cancellation factor exceeds ``CANCELLATION_LIMIT``).
    """
    if evaluation not in ("auto", "symbolic", "taylor"):
        raise InvalidParameter(f"evaluation must be auto, symbolic or taylor, got {evaluation!r}")
    kind = Kind(kind)
    _check_params(omega1, omega2, tau)
    if int(K) != K or K < 1:
        raise InvalidParameter(f"interval count K must be a positive integer, got {K!r}")
    K = int(K)
    if K > MAX_INTERVALS:
        raise InvalidParameter(f"K={K} exceeds the cap of {MAX_INTERVALS} intervals")
    if K > WARN_INTERVALS:
        warnings.warn(
            f"K={K} > {WARN_INTERVALS}: polynomial degree grows with K and "
            "double-precision evaluation degrades at large t",
            RuntimeWarning,
            stacklevel=2,
        )
    omega1 = float(omega1)
    omega2 = float(omega2)
    tau = float(tau)
    pieces = [_prelude(kind, omega1)]
    for _ in range(K):
        pieces.append(step(pieces[-1], omega1, omega2, tau))
    taylor = _taylor_tables(pieces[0], omega1, omega2, tau, K)
    kappa = _cancellation(pieces, taylor, tau)
    if evaluation == "auto":
        evaluation = "symbolic" if kappa <= CANCELLATION_LIMIT else "taylor"
    return PiecewiseSolution(kind, tau, omega1, omega2, tuple(pieces), taylor, evaluation, kappa)


def _locate(ps: PiecewiseSolution, t: np.ndarray):
    tau = ps.tau
    if np.any(t >= ps.horizon):
        bad = float(t[t >= ps.horizon][0])
        raise OutOfHorizon(f"t={bad!r} is beyond the horizon K*tau={ps.horizon!r}")
    live = t >= -tau
    idx = np.floor(t / tau).astype(np.intp) + 1
    np.clip(idx, 0, ps.K, out=idx)
    u = t - (idx - 1) * tau
    return live, idx, u


def eval_piecewise(ps: PiecewiseSolution, t, order: int = 0):
    """Value (``order=0``) or exact derivative of order 1 or 2 at ``t``.

    Zero before ``-tau``. Knots belong to the interval on their right.
    Accepts scalars or arrays; raises OutOfHorizon for ``t >= K tau``.
    """
    if order not in (0, 1, 2):
        raise InvalidParameter(f"order must be 0, 1 or 2, got {order!r}")
    scalar = np.ndim(t) == 0
    ta = np.asarray(t, dtype=float).ravel()
    live, idx, u = _locate(ps, ta)
    if ps.evaluation == "taylor":
        tt = ps.taylor
        sub = np.minimum(np.floor(u / tt.h).astype(np.intp), tt.m - 1)
        np.maximum(sub, 0, out=sub)
        out = kernels.eval_poly_packed(tt.orders[order], idx * tt.m + sub, u - sub * tt.h)
    else:
        P, Q, R = ps._tables[order]
        out = kernels.eval_packed(P, Q, R, ps.omega1, idx, u)
    out = np.where(live, out, 0.0)
    return float(out[0]) if scalar else out.reshape(np.shape(t))


def _delay_trig(omega, tau, t, odd):
    if not (tau > 0 and math.isfinite(tau)):
        raise InvalidParameter(f"tau must be positive, got {tau!r}")
    if not (omega >= 0 and math.isfinite(omega)):
        raise InvalidParameter(f"omega must be non-negative, got {omega!r}")
    scalar = np.ndim(t) == 0
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    live = ta >= -tau
    k = np.where(live, np.floor(ta / tau).astype(np.int64) + 1, -1)
    out = np.zeros_like(ta)
    kmax = int(k.max()) if k.size else -1
    for j in range(kmax + 1):
        on = k >= j
        d = np.where(on, ta - (j - 1) * tau, 0.0)
        n = 2 * j + 1 if odd else 2 * j
        term = (omega * d) ** n / math.factorial(n)
        out += np.where(on, (-1.0) ** j * term, 0.0)
    return float(out[0]) if scalar else out.reshape(np.shape(t))


def delay_cosine(omega: float, tau: float, t):
    """Delayed cosine: 0 before ``-tau``, 1 on ``[-tau, 0)``, and on
    ``[(k-1) tau, k tau)`` the sum over ``j = 0..k`` of
    ``(-1)^j omega^(2j) (t - (j-1) tau)^(2j) / (2j)!``."""
    return _delay_trig(omega, tau, t, odd=False)


def delay_sine(omega: float, tau: float, t):
    """Delayed sine: like :func:`delay_cosine` with odd powers ``2j + 1``;
    equals ``omega (t + tau)`` on ``[-tau, 0)``."""
    return _delay_trig(omega, tau, t, odd=True)
