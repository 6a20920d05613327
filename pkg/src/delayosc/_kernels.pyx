# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_purepy``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def eval_packed(double[:, ::1] P, double[:, ::1] Q, double[:, ::1] R,
                double omega, idx, u):
    cdef cnp.intp_t[::1] ix = np.ascontiguousarray(idx, dtype=np.intp)
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0]
    cdef Py_ssize_t ncoef = P.shape[1]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, row
    cdef double t, p, q, r
    for i in range(n):
        row = ix[i]
        t = uu[i]
        p = 0.0
        q = 0.0
        r = 0.0
        for j in range(ncoef - 1, -1, -1):
            p = p * t + P[row, j]
            q = q * t + Q[row, j]
            r = r * t + R[row, j]
        if omega == 0.0:
            o[i] = p + q
        else:
            o[i] = p + q * cos(omega * t) + r * sin(omega * t)
    return out


def eval_poly_packed(double[:, ::1] C, idx, v):
    cdef cnp.intp_t[::1] ix = np.ascontiguousarray(idx, dtype=np.intp)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0]
    cdef Py_ssize_t ncoef = C.shape[1]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, row
    cdef double x, acc
    for i in range(n):
        row = ix[i]
        x = vv[i]
        acc = 0.0
        for j in range(ncoef - 1, -1, -1):
            acc = acc * x + C[row, j]
        o[i] = acc
    return out


def rk4_march(double w1sq, double w2sq, double h, Py_ssize_t m, Py_ssize_t n_steps,
              double x0, double v0, f_half, phi_half):
    cdef double[::1] f = np.ascontiguousarray(f_half, dtype=np.float64)
    cdef double[::1] ph = np.ascontiguousarray(phi_half, dtype=np.float64)
    xa_ = np.empty(n_steps + 1)
    va_ = np.empty(n_steps + 1)
    cdef double[::1] x = xa_
    cdef double[::1] v = va_
    cdef Py_ssize_t n, j
    cdef double xn = x0, vn = v0, hh = 0.5 * h
    cdef double d0, d1, d2, f0, f1, f2
    cdef double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v, xa, va, xb, vb, xc, vc
    x[0] = x0
    v[0] = v0
    for n in range(n_steps):
        if n < m:
            d0 = ph[2 * n]
            d1 = ph[2 * n + 1]
            d2 = ph[2 * n + 2]
        else:
            j = n - m
            d0 = x[j]
            d2 = x[j + 1]
            d1 = 0.5 * (d0 + d2) + 0.125 * h * (v[j] - v[j + 1])
        f0 = f[2 * n]
        f1 = f[2 * n + 1]
        f2 = f[2 * n + 2]

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
    return xa_, va_
