"""Composite Gauss-Legendre rules on panels split at kernel knots."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidParameter

__all__ = ["QuadratureConfig", "gauss_legendre", "panel_breaks", "composite_nodes"]


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_per_panel: int = 16
    # always split at kernel knots; kept as a field so reports can state it
    split_at_knots: bool = True

    def __post_init__(self):
        if not 2 <= int(self.nodes_per_panel) <= 64:
            raise InvalidParameter(
                f"nodes_per_panel must lie in [2, 64], got {self.nodes_per_panel!r}"
            )
        if not self.split_at_knots:
            raise InvalidParameter("panel splitting at kernel knots cannot be disabled")


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_breaks(a: float, b: float, t: float, tau: float, extra=()) -> np.ndarray:
    """Sorted breakpoints of ``[a, b]`` at every ``s = t - j tau`` (integer ``j``)
    strictly inside, plus any ``extra`` points inside."""
    jlo = int(np.floor((t - b) / tau))
    jhi = int(np.ceil((t - a) / tau))
    cand = [t - j * tau for j in range(jlo, jhi + 1)]
    cand.extend(extra)
    eps = 1e-14 * max(1.0, abs(a), abs(b))
    inner = sorted(s for s in cand if a + eps < s < b - eps)
    return np.array([a, *inner, b])


def composite_nodes(breaks_per_owner, n: int):
    """Flatten per-owner panel rules into ``(owner, nodes, weights)`` arrays."""
    xg, wg = gauss_legendre(n)
    lo, hi, owner = [], [], []
    for k, br in enumerate(breaks_per_owner):
        lo.append(br[:-1])
        hi.append(br[1:])
        owner.append(np.full(len(br) - 1, k, dtype=np.intp))
    if not lo:
        return np.empty(0, np.intp), np.empty(0), np.empty(0)
    lo = np.concatenate(lo)
    hi = np.concatenate(hi)
    owner = np.concatenate(owner)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return np.repeat(owner, n), nodes, weights
