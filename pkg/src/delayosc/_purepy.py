"""NumPy implementations of the hot kernels.

Semantics are the reference for the compiled versions in ``_kernels.pyx``;
both are checked against each other in the test suite.
"""

import numpy as np


def eval_packed(P, Q, R, omega, idx, u):
    """Evaluate packed trig-polynomial pieces.

    Row ``idx[i]`` of the coefficient tables ``P``, ``Q``, ``R`` (ascending
    powers, zero padded) is evaluated at local time ``u[i]`` as
    ``p(u) + q(u) cos(omega u) + r(u) sin(omega u)``.
    """
    idx = np.asarray(idx, dtype=np.intp)
    u = np.asarray(u, dtype=float)
    ncoef = P.shape[1]
    p = np.zeros_like(u)
    q = np.zeros_like(u)
    r = np.zeros_like(u)
    for j in range(ncoef - 1, -1, -1):
        p = p * u + P[idx, j]
        q = q * u + Q[idx, j]
        r = r * u + R[idx, j]
    if omega == 0.0:
        return p + q
    wu = omega * u
    return p + q * np.cos(wu) + r * np.sin(wu)


def eval_poly_packed(C, idx, v):
    """Row ``idx[i]`` of the polynomial table ``C`` evaluated at ``v[i]`` (Horner)."""
    idx = np.asarray(idx, dtype=np.intp)
    v = np.asarray(v, dtype=float)
    acc = np.zeros_like(v)
    for j in range(C.shape[1] - 1, -1, -1):
        acc = acc * v + C[idx, j]
    return acc


def rk4_march(w1sq, w2sq, h, m, n_steps, x0, v0, f_half, phi_half):
    """Classical RK4 for ``x'' = f - w1sq x - w2sq x(t - m h)``.

    ``f_half[j]`` is the forcing at ``t = j h / 2`` (``2 n_steps + 1``
    samples) and ``phi_half[j]`` the history at ``t = -m h + j h / 2``
    (``2 m + 1`` samples). Once ``t - m h >= 0`` the delayed value comes
    from the stored grid, with cubic Hermite interpolation at midpoints.
    """
    x = np.empty(n_steps + 1)
    v = np.empty(n_steps + 1)
    x[0] = x0
    v[0] = v0
    xn, vn = float(x0), float(v0)
    hh = 0.5 * h
    for n in range(n_steps):
        if n < m:
            d0 = phi_half[2 * n]
            d1 = phi_half[2 * n + 1]
            d2 = phi_half[2 * n + 2]
        else:
            j = n - m
            d0 = x[j]
            d2 = x[j + 1]
            d1 = 0.5 * (d0 + d2) + 0.125 * h * (v[j] - v[j + 1])
        f0 = f_half[2 * n]
        f1 = f_half[2 * n + 1]
        f2 = f_half[2 * n + 2]

        k1x = vn
        k1v = f0 - w1sq * xn - w2sq * d0
        xa = xn + hh * k1x
        va = vn + hh * k1v
        k2x = va
        k2v = f1 - w1sq * xa - w2sq * d1
        xb = xn + hh * k2x
        vb = vn + hh * k2v
        k3x = vb
        k3v = f1 - w1sq * xb - w2sq * d1
        xc = xn + h * k3x
        vc = vn + h * k3v
        k4x = vc
        k4v = f2 - w1sq * xc - w2sq * d2

        xn = xn + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        vn = vn + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        x[n + 1] = xn
        v[n + 1] = vn
    return x, v
