"""Problem definition shared by the analytic solver and the oracle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from .errors import InvalidParameter
from .exprparse import Expression, differentiate, parse, to_string

__all__ = ["ForcingKernel", "Problem"]


class ForcingKernel(enum.Enum):
    """Representation used to assemble the Cauchy solution.

    ``X2_DEFAULT``: sine-type kernel in both integrals, valid for every
    ``omega1`` (coincides with the printed formulas when ``omega1 == 0``).
    ``X1_LITERAL``: forcing convolved with ``x1`` as printed in the
    variation-of-parameters statement; history term as in the default.
    ``X2_LITERAL``: the printed representation taken verbatim, ``x2`` in
    both integrals and no ``omega1`` correction of the history term.
    """

    X2_DEFAULT = "x2"
    X1_LITERAL = "x1"
    X2_LITERAL = "x2-literal"


def _as_expr(e: Union[str, Expression]) -> Expression:
    return parse(e) if isinstance(e, str) else e


@dataclass(frozen=True)
class Problem:
    """``x'' + omega1^2 x(t) + omega2^2 x(t - tau) = f(t)`` for ``0 <= t < K tau``
    with ``x = phi`` on ``[-tau, 0]``.

    ``phi`` and ``f`` may be given as text; they are parsed on construction
    (ExpressionError propagates).
    """

    omega1: float
    omega2: float
    tau: float
    K: int
    phi: Expression = field(default="0")
    f: Expression = field(default="0")
    forcing_kernel: ForcingKernel = ForcingKernel.X2_DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "phi", _as_expr(self.phi))
        object.__setattr__(self, "f", _as_expr(self.f))
        object.__setattr__(self, "forcing_kernel", ForcingKernel(self.forcing_kernel))
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise InvalidParameter(f"tau must be positive, got {self.tau!r}")
        for name in ("omega1", "omega2"):
            w = getattr(self, name)
            if not (w >= 0 and math.isfinite(w)):
                raise InvalidParameter(f"{name} must be non-negative, got {w!r}")
        if int(self.K) != self.K or self.K < 1:
            raise InvalidParameter(f"K must be a positive integer, got {self.K!r}")
        object.__setattr__(self, "K", int(self.K))

    @property
    def horizon(self) -> float:
        return self.K * self.tau

    @cached_property
    def dphi(self) -> Expression:
        return differentiate(self.phi)

    @cached_property
    def d2phi(self) -> Expression:
        return differentiate(self.dphi)

    @cached_property
    def df(self) -> Expression:
        return differentiate(self.f)

    def describe(self) -> dict:
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "tau": self.tau,
            "K": self.K,
            "phi": to_string(self.phi),
            "f": to_string(self.f),
            "kernel": self.forcing_kernel.value,
        }
