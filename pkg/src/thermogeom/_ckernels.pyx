# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``.

Same names, same signatures, same results to rounding.
"""

import numpy as np

from libc.math cimport fabs, sqrt, copysign

BACKEND = "cython"


def det(a):
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t c, r, k, p
    cdef double d = 1.0, piv, f, best, tmp
    for c in range(n):
        p = c
        best = fabs(m[c, c])
        for r in range(c + 1, n):
            if fabs(m[r, c]) > best:
                best = fabs(m[r, c])
                p = r
        piv = m[p, c]
        if piv == 0.0:
            return 0.0
        if p != c:
            for k in range(n):
                tmp = m[c, k]
                m[c, k] = m[p, k]
                m[p, k] = tmp
            d = -d
        d *= piv
        for r in range(c + 1, n):
            f = m[r, c] / piv
            if f != 0.0:
                for k in range(c, n):
                    m[r, k] -= f * m[c, k]
    return d


def inv(a):
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    out_arr = np.eye(n)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t c, r, k, p
    cdef double piv, f, best, tmp
    for c in range(n):
        p = c
        best = fabs(m[c, c])
        for r in range(c + 1, n):
            if fabs(m[r, c]) > best:
                best = fabs(m[r, c])
                p = r
        piv = m[p, c]
        if piv == 0.0:
            raise ZeroDivisionError("singular matrix")
        if p != c:
            for k in range(n):
                tmp = m[c, k]
                m[c, k] = m[p, k]
                m[p, k] = tmp
                tmp = out[c, k]
                out[c, k] = out[p, k]
                out[p, k] = tmp
        for k in range(n):
            m[c, k] /= piv
            out[c, k] /= piv
        for r in range(n):
            if r != c:
                f = m[r, c]
                if f != 0.0:
                    for k in range(n):
                        m[r, k] -= f * m[c, k]
                        out[r, k] -= f * out[c, k]
    return out_arr


def jacobi_eigenvalues(a, double tol=1e-14, int max_sweeps=64):
    cdef double[:, ::1] m = np.array(a, dtype=np.float64, order="C")
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double scale = 0.0, off, apq, theta, t, c, s, x, y
    for p in range(n):
        for q in range(n):
            if fabs(m[p, q]) > scale:
                scale = fabs(m[p, q])
    if scale == 0.0:
        return np.zeros(n)
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += m[p, q] * m[p, q]
        if sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = m[k, p]
                    y = m[k, q]
                    m[k, p] = c * x - s * y
                    m[k, q] = s * x + c * y
                for k in range(n):
                    x = m[p, k]
                    y = m[q, k]
                    m[p, k] = c * x - s * y
                    m[q, k] = s * x + c * y
    ev = np.empty(n)
    for p in range(n):
        ev[p] = m[p, p]
    ev.sort()
    return ev


def hessian_christoffel(ginv, dg):
    cdef const double[:, ::1] gi = np.ascontiguousarray(ginv, dtype=np.float64)
    cdef const double[:, :, ::1] d = np.ascontiguousarray(dg, dtype=np.float64)
    cdef Py_ssize_t n = gi.shape[0]
    out_arr = np.zeros((n, n, n))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, i, j, m
    cdef double acc
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for m in range(n):
                    acc += d[i, j, m] * gi[k, m]
                out[k, i, j] = 0.5 * acc
    return out_arr


def levi_civita_christoffel(ginv, dg):
    cdef const double[:, ::1] gi = np.ascontiguousarray(ginv, dtype=np.float64)
    cdef const double[:, :, ::1] d = np.ascontiguousarray(dg, dtype=np.float64)
    cdef Py_ssize_t n = gi.shape[0]
    out_arr = np.zeros((n, n, n))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, i, j, m
    cdef double acc
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for m in range(n):
                    acc += gi[k, m] * (d[j, m, i] + d[i, m, j] - d[i, j, m])
                out[k, i, j] = 0.5 * acc
    return out_arr


def hessian_riemann(ginv, dg):
    cdef const double[:, ::1] gi = np.ascontiguousarray(ginv, dtype=np.float64)
    cdef const double[:, :, ::1] d = np.ascontiguousarray(dg, dtype=np.float64)
    cdef Py_ssize_t n = gi.shape[0]
    a_arr = np.zeros((n, n, n))
    b_arr = np.zeros((n, n, n))
    out_arr = np.zeros((n, n, n, n))
    cdef double[:, :, ::1] a = a_arr
    cdef double[:, :, ::1] b = b_arr
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t l, i, j, k, m, s
    cdef double acc
    # a[i,j,n] = d_ijm g^mn ; b[l,n,k] = g^ls d_snk
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0
                for m in range(n):
                    acc += d[i, j, m] * gi[m, k]
                a[i, j, k] = acc
    for l in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0
                for s in range(n):
                    acc += gi[l, s] * d[s, j, k]
                b[l, j, k] = acc
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = 0.0
                    for m in range(n):
                        acc += a[i, j, m] * b[l, m, k] - a[k, i, m] * b[l, m, j]
                    out[l, i, j, k] = 0.25 * acc
    return out_arr


def ricci_scalar(riem, ginv):
    cdef const double[:, :, :, ::1] r = np.ascontiguousarray(riem, dtype=np.float64)
    cdef const double[:, ::1] gi = np.ascontiguousarray(ginv, dtype=np.float64)
    cdef Py_ssize_t n = gi.shape[0]
    ric_arr = np.zeros((n, n))
    cdef double[:, ::1] ric = ric_arr
    cdef Py_ssize_t i, j, k
    cdef double acc, sc = 0.0
    for i in range(n):
        for k in range(n):
            acc = 0.0
            for j in range(n):
                acc += r[j, i, j, k]
            ric[i, k] = acc
            sc += acc * gi[i, k]
    return ric_arr, sc
