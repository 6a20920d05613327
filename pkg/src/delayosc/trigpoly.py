"""Closed algebra of functions ``P(t) + Q(t) cos(wt) + R(t) sin(wt)``.

``P``, ``Q`` and ``R`` are real polynomials. The set is closed under
addition, scaling, differentiation, argument shift and under solving
``y'' + w**2 y = g`` for a right-hand side at the same frequency (the
resonant case raises the polynomial degree by one). That closure is what
lets the method-of-steps recursion run without discretisation.

Values are immutable; every operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FrequencyMismatch

__all__ = [
    "Polynomial",
    "TrigPoly",
    "eval",
    "add",
    "scale",
    "derivative",
    "shift",
    "solve_particular",
    "homogeneous_with_ic",
]


def _strip(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in ascending powers; ``coeffs[i]`` multiplies ``t**i``.

    Trailing zeros are never stored, so the zero polynomial is ``()``.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @classmethod
    def constant(cls, c: float) -> Polynomial:
        return cls((c,))

    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        acc = 0.0 * t if isinstance(t, np.ndarray) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __neg__(self) -> Polynomial:
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scale(self, c: float) -> Polynomial:
        return Polynomial([c * x for x in self.coeffs])

    def derivative(self) -> Polynomial:
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def antiderivative(self) -> Polynomial:
        """Antiderivative with zero constant of integration."""
        return Polynomial([0.0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def shift(self, c: float) -> Polynomial:
        """Return ``u`` with ``u(t) == self(t + c)`` (Taylor shift)."""
        if c == 0.0 or self.degree() < 1:
            return self
        # synthetic division repeated n times; exact in the binomial sense
        a = list(self.coeffs)
        n = len(a)
        for k in range(n - 1):
            for j in range(n - 2, k - 1, -1):
                a[j] += c * a[j + 1]
        return Polynomial(a)


_ZERO = Polynomial()


@dataclass(frozen=True)
class TrigPoly:
    """``p(t) + q(t) cos(omega t) + r(t) sin(omega t)``.

    A value with no trig part is *pure*; its ``omega`` is normalised to 0 so
    that pure values compare equal whatever frequency produced them.
    """

    omega: float = 0.0
    p: Polynomial = _ZERO
    q: Polynomial = _ZERO
    r: Polynomial = _ZERO

    def __post_init__(self):
        for name in ("p", "q", "r"):
            v = getattr(self, name)
            if not isinstance(v, Polynomial):
                object.__setattr__(self, name, Polynomial(v))
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        if self.omega == 0.0:
            # cos(0 t) = 1 and sin(0 t) = 0
            object.__setattr__(self, "p", self.p + self.q)
            object.__setattr__(self, "q", _ZERO)
            object.__setattr__(self, "r", _ZERO)
        elif self.q.is_zero() and self.r.is_zero():
            object.__setattr__(self, "omega", 0.0)
        object.__setattr__(self, "omega", float(self.omega))

    @classmethod
    def pure(cls, coeffs: Sequence[float]) -> TrigPoly:
        return cls(0.0, Polynomial(coeffs))

    @property
    def is_pure(self) -> bool:
        return self.q.is_zero() and self.r.is_zero()

    def is_zero(self) -> bool:
        return self.is_pure and self.p.is_zero()

    def degree(self) -> int:
        return max(self.p.degree(), self.q.degree(), self.r.degree())

    def __call__(self, t):
        return eval(self, t)

    def __add__(self, other: TrigPoly) -> TrigPoly:
        return add(self, other)

    def __neg__(self) -> TrigPoly:
        return scale(self, -1.0)

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        return add(self, scale(other, -1.0))


def eval(tp: TrigPoly, t):
    """Evaluate at a scalar or an array of times (Horner for each factor)."""
    val = tp.p(t)
    if tp.is_pure:
        return val + 0.0 * t if isinstance(t, np.ndarray) else val
    wt = tp.omega * t
    if isinstance(t, np.ndarray):
        return val + tp.q(t) * np.cos(wt) + tp.r(t) * np.sin(wt)
    return val + tp.q(t) * math.cos(wt) + tp.r(t) * math.sin(wt)


def _common_omega(a: TrigPoly, b: TrigPoly) -> float:
    if a.is_pure:
        return b.omega
    if b.is_pure or a.omega == b.omega:
        return a.omega
    raise FrequencyMismatch(f"cannot combine frequencies {a.omega} and {b.omega}")


def add(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    return TrigPoly(_common_omega(a, b), a.p + b.p, a.q + b.q, a.r + b.r)


def scale(a: TrigPoly, c: float) -> TrigPoly:
    return TrigPoly(a.omega, a.p.scale(c), a.q.scale(c), a.r.scale(c))


def derivative(tp: TrigPoly) -> TrigPoly:
    # (q cos)' = q' cos - w q sin ;  (r sin)' = r' sin + w r cos
    w = tp.omega
    return TrigPoly(
        w,
        tp.p.derivative(),
        tp.q.derivative() + tp.r.scale(w),
        tp.r.derivative() - tp.q.scale(w),
    )


def shift(tp: TrigPoly, c: float) -> TrigPoly:
    """Return ``u`` with ``u(t) == tp(t + c)`` for every ``t``."""
    if c == 0.0:
        return tp
    p, q, r = tp.p.shift(c), tp.q.shift(c), tp.r.shift(c)
    if tp.is_pure:
        return TrigPoly(0.0, p)
    cw, sw = math.cos(tp.omega * c), math.sin(tp.omega * c)
    # cos w(t+c) = cw cos wt - sw sin wt ;  sin w(t+c) = sw cos wt + cw sin wt
    return TrigPoly(
        tp.omega,
        p,
        q.scale(cw) + r.scale(sw),
        r.scale(cw) - q.scale(sw),
    )


def _pure_particular(g: Polynomial, w2: float) -> Polynomial:
    # y = sum_j (-1)^j D^{2j} g / w2^{j+1} terminates because D^{2j} g -> 0
    out = _ZERO
    term = g.scale(1.0 / w2)
    sign = 1.0
    while not term.is_zero():
        out = out + term.scale(sign)
        term = term.derivative().derivative().scale(1.0 / w2)
        sign = -sign
    return out


def solve_particular(rhs: TrigPoly, omega1: float) -> TrigPoly:
    """A particular solution ``y`` of ``y'' + omega1**2 y = rhs``.

    For ``omega1 == 0`` this is the double antiderivative with both
    integration constants zero. Otherwise the pure part is inverted by a
    terminating Neumann series and the resonant trig part by undetermined
    coefficients ``y = A cos + B sin`` with ``A(0) = B(0) = 0``.
    """
    if omega1 < 0:
        raise ValueError("omega1 must be non-negative")
    if not rhs.is_pure and rhs.omega != omega1:
        raise FrequencyMismatch(
            f"rhs frequency {rhs.omega} is neither 0 nor omega1={omega1}"
        )
    if omega1 == 0.0:
        return TrigPoly(0.0, rhs.p.antiderivative().antiderivative())

    w = omega1
    y_pure = _pure_particular(rhs.p, w * w)
    if rhs.is_pure:
        return TrigPoly(0.0, y_pure)

    # With a = A', b = B':  a' + 2w b = q,  b' - 2w a = r.
    # Eliminating b: 4w^2 a + a'' = q' - 2w r.
    q, r = rhs.q, rhs.r
    s = q.derivative() - r.scale(2 * w)
    a = _pure_particular(s, 4 * w * w)
    b = (q - a.derivative()).scale(1.0 / (2 * w))
    return TrigPoly(w, y_pure, a.antiderivative(), b.antiderivative())


def homogeneous_with_ic(omega1: float, y0: float, y0p: float, t0: float = 0.0) -> TrigPoly:
    """Free oscillation with ``y(t0) = y0`` and ``y'(t0) = y0p``."""
    if omega1 < 0:
        raise ValueError("omega1 must be non-negative")
    if omega1 == 0.0:
        return TrigPoly.pure([y0 - y0p * t0, y0p])
    local = TrigPoly(omega1, _ZERO, Polynomial([y0]), Polynomial([y0p / omega1]))
    return shift(local, -t0)
