# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: held-input state-space recursion and triangular
Toeplitz apply/solve.  Signatures mirror pulsecal._kernels_py."""

from libc.math cimport fabs, isfinite

import numpy as np


def simulate_held(Ad, Bd, C, double D, r, int M):
    cdef const double[:, ::1] A = np.ascontiguousarray(Ad, dtype=np.float64).reshape(
        (Ad.shape[0] if Ad.size else 0,) * 2)
    cdef const double[::1] B = np.ascontiguousarray(Bd, dtype=np.float64).ravel()
    cdef const double[::1] c = np.ascontiguousarray(C, dtype=np.float64).ravel()
    cdef const double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef int n = A.shape[0]
    cdef int N = rv.shape[0]
    out = np.empty(N * M + 1)
    cdef double[::1] o = out
    x_arr = np.zeros(n)
    xn_arr = np.zeros(n)
    cdef double[::1] x = x_arr
    cdef double[::1] xn = xn_arr
    cdef double[::1] tmp
    cdef Py_ssize_t idx = 0
    cdef int k, j, i, l
    cdef double rk, acc
    for k in range(N):
        rk = rv[k]
        for j in range(M):
            acc = D * rk
            for i in range(n):
                acc += c[i] * x[i]
            o[idx] = acc
            idx += 1
            for i in range(n):
                acc = B[i] * rk
                for l in range(n):
                    acc += A[i, l] * x[l]
                xn[i] = acc
            tmp = x
            x = xn
            xn = tmp
    acc = D * rv[N - 1]
    for i in range(n):
        acc += c[i] * x[i]
    o[idx] = acc
    return out


def toeplitz_apply(m, r):
    cdef const double[::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef int n = rv.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef int i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(i + 1):
            acc += mv[i - j] * rv[j]
        o[i] = acc
    return out


def toeplitz_solve(m, y, double guard):
    cdef const double[::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef int n = yv.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef int i, j
    cdef double acc, m0 = mv[0]
    for i in range(n):
        acc = yv[i]
        for j in range(i):
            acc -= mv[i - j] * o[j]
        acc /= m0
        o[i] = acc
        if not isfinite(acc) or fabs(acc) > guard:
            out[i + 1:] = 0.0
            return out, i
    return out, -1
