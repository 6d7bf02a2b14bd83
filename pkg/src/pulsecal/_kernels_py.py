"""Pure-Python/numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or disabled.  The held-input
simulator is vectorized per sampling period: fine-step transition powers are
precomputed once, so the Python-level loop runs over periods, not fine steps.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular, toeplitz


def simulate_held(Ad: np.ndarray, Bd: np.ndarray, C: np.ndarray, D: float,
                  r: np.ndarray, M: int) -> np.ndarray:
    """Simulate x+ = Ad x + Bd u, y = C x + D u from rest.

    The input is r[k] held for M consecutive fine steps; the returned array
    has N*M + 1 entries (fine grid including both endpoints, with the final
    point driven by the last held value).
    """
    r = np.ascontiguousarray(r, dtype=float)
    N = r.shape[0]
    n = Ad.shape[0] if Ad.size else 0
    out = np.empty(N * M + 1)
    if n == 0:
        out[:-1] = D * np.repeat(r, M)
        out[-1] = D * r[-1]
        return out
    A = np.asarray(Ad, dtype=float).reshape(n, n)
    B = np.asarray(Bd, dtype=float).reshape(n)
    c = np.asarray(C, dtype=float).reshape(n)
    # P[j] = A^j, G[j] = sum_{i<j} A^i B  for j = 0..M
    P = np.empty((M + 1, n, n))
    G = np.empty((M + 1, n))
    P[0] = np.eye(n)
    G[0] = 0.0
    for j in range(M):
        P[j + 1] = A @ P[j]
        G[j + 1] = A @ G[j] + B
    CP = P[:M] @ c if False else np.einsum("i,mij->mj", c, P)  # (M+1, n)
    CG = np.einsum("i,mi->m", c, G)  # (M+1,)
    x = np.zeros(n)
    for k in range(N):
        rk = r[k]
        out[k * M:(k + 1) * M] = CP[:M] @ x + CG[:M] * rk + D * rk
        x = P[M] @ x + G[M] * rk
    out[N * M] = c @ x + D * r[-1]
    return out


def toeplitz_apply(m: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Lower-triangular Toeplitz product: out[i] = sum_{j<=i} m[i-j] r[j]."""
    m = np.asarray(m, dtype=float)
    r = np.asarray(r, dtype=float)
    return np.convolve(m, r)[: r.shape[0]]


def toeplitz_solve(m: np.ndarray, y: np.ndarray, guard: float):
    """Forward substitution on the lower-triangular Toeplitz system.

    Returns (solution, bad_index); bad_index is the first position whose
    magnitude is non-finite or exceeds guard, or -1 if the solve stayed
    within bounds.
    """
    m = np.asarray(m, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    with np.errstate(over="ignore", invalid="ignore"):
        L = toeplitz(m[:n], np.zeros(n))
        r = solve_triangular(L, y, lower=True, check_finite=False)
    bad = ~np.isfinite(r) | (np.abs(r) > guard)
    idx = int(np.argmax(bad)) if bad.any() else -1
    return r, idx
