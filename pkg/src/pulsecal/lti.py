"""Rational SISO transfer functions and their exact sampled-time images.

Coefficients are stored in ascending powers of s.  Only proper fractions are
representable; inverse (improper) systems are never realized here -- they are
handled in lifted form by :mod:`pulsecal.lifted`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.linalg import expm

from .errors import ModelError, SingularityError


def _as_coeffs(raw, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(raw, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ModelError(f"{what} must be a nonempty 1-D coefficient sequence")
    if not np.all(np.isfinite(arr)):
        raise ModelError(f"{what} contains non-finite coefficients")
    # drop vanishing leading (highest-power) terms so degrees are meaningful
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return arr[:1].copy()
    return arr[: nz[-1] + 1].copy()


@dataclass(frozen=True)
class TransferFunction:
    """Proper rational function num(s)/den(s), ascending coefficients."""

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        num = _as_coeffs(self.numerator, "numerator")
        den = _as_coeffs(self.denominator, "denominator")
        if not np.any(den):
            raise ModelError("denominator must not be identically zero")
        if np.any(num) and num.size > den.size:
            raise ModelError(
                f"improper fraction: numerator degree {num.size - 1} exceeds "
                f"denominator degree {den.size - 1}"
            )
        # normalize so the denominator constant term is 1 when nonzero
        if den[0] != 0.0:
            scale = den[0]
            num = num / scale
            den = den / scale
        num.setflags(write=False)
        den.setflags(write=False)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def order(self) -> int:
        return self.denominator.size - 1

    def poles(self) -> np.ndarray:
        if self.order == 0:
            return np.empty(0, dtype=complex)
        return np.roots(self.denominator[::-1])

    def zeros(self) -> np.ndarray:
        if self.numerator.size <= 1:
            return np.empty(0, dtype=complex)
        return np.roots(self.numerator[::-1])

    def __call__(self, s: complex) -> complex:
        num = np.polyval(self.numerator[::-1], s)
        den = np.polyval(self.denominator[::-1], s)
        if den == 0:
            raise SingularityError(f"pole at s = {s}")
        return num / den

    def _key(self):
        return (tuple(self.numerator), tuple(self.denominator))


@dataclass(frozen=True)
class StateSpace:
    """Canonical SISO realization (A, B, C, D); n may be zero (pure gain)."""

    A: np.ndarray  # (n, n)
    B: np.ndarray  # (n, 1)
    C: np.ndarray  # (1, n)
    D: float

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        if A.size == 0:
            A = A.reshape(0, 0)
        B = np.asarray(self.B, dtype=float).reshape(A.shape[0], 1)
        C = np.asarray(self.C, dtype=float).reshape(1, A.shape[0])
        if A.shape[0] != A.shape[1]:
            raise ModelError("A must be square")
        for m in (A, B, C):
            m.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", float(self.D))

    @property
    def order(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class DiscreteStateSpace:
    """Zero-order-hold image of a :class:`StateSpace` at a fixed step."""

    Ad: np.ndarray
    Bd: np.ndarray
    C: np.ndarray
    D: float
    step: float

    def __post_init__(self):
        if self.step <= 0:
            raise ModelError("step must be positive")
        Ad = np.atleast_2d(np.asarray(self.Ad, dtype=float))
        if Ad.size == 0:
            Ad = Ad.reshape(0, 0)
        Bd = np.asarray(self.Bd, dtype=float).reshape(Ad.shape[0], 1)
        C = np.asarray(self.C, dtype=float).reshape(1, Ad.shape[0])
        for m in (Ad, Bd, C):
            m.setflags(write=False)
        object.__setattr__(self, "Ad", Ad)
        object.__setattr__(self, "Bd", Bd)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", float(self.D))
        object.__setattr__(self, "step", float(self.step))

    @property
    def order(self) -> int:
        return self.Ad.shape[0]


def make_transfer_function(numerator: Sequence[float],
                           denominator: Sequence[float]) -> TransferFunction:
    """Validate and normalize a proper rational model."""
    return TransferFunction(np.asarray(numerator, dtype=float),
                            np.asarray(denominator, dtype=float))


def from_time_constants(time_constants: Sequence[float],
                        zero_constants: Sequence[float] = (),
                        gain: float = 1.0) -> TransferFunction:
    """Build gain * prod(z_i s + 1) / prod(T_j s + 1) with expanded products.

    A negative zero constant places the corresponding zero in the right half
    plane (non-minimum phase).
    """
    num = np.array([float(gain)])
    for z in zero_constants:
        num = np.convolve(num, [1.0, float(z)])
    den = np.array([1.0])
    for T in time_constants:
        if T <= 0:
            raise ModelError(f"time constant must be positive, got {T}")
        den = np.convolve(den, [1.0, float(T)])
    return make_transfer_function(num, den)


def to_state_space(tf: TransferFunction) -> StateSpace:
    """Canonical realization of a proper transfer function.

    Uses the companion form whose output matrix selects the last state, so a
    first-order lag 1/(Ts+1) realizes as A=[-1/T], B=[1/T], C=[1], D=0.
    """
    den = tf.denominator
    num = tf.numerator
    n = den.size - 1
    lead = den[-1]
    a = den / lead  # monic, ascending; a[n] == 1
    b = np.zeros(n + 1)
    b[: num.size] = num / lead
    d = b[n]
    if n == 0:
        return StateSpace(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), d)
    A = np.zeros((n, n))
    A[1:, :-1] = np.eye(n - 1)  # subdiagonal ones
    A[:, -1] = -a[:n]
    B = (b[:n] - d * a[:n]).reshape(n, 1)
    C = np.zeros((1, n))
    C[0, -1] = 1.0
    return StateSpace(A, B, C, d)


def to_transfer_function(ss: StateSpace) -> TransferFunction:
    """Reconstruct the rational form of a realization (round-trip check)."""
    n = ss.order
    if n == 0:
        return make_transfer_function([ss.D], [1.0])
    den_desc = np.poly(ss.A)  # det(sI - A), descending
    num_desc = np.poly(ss.A - ss.B @ ss.C) - (1.0 - ss.D) * den_desc
    return make_transfer_function(num_desc[::-1], den_desc[::-1])


def zoh_discretize(ss: StateSpace, step: float) -> DiscreteStateSpace:
    """Exact zero-order-hold discretization via the augmented exponential.

    Ad = exp(A*step) and Bd = (int_0^step exp(A sigma) dsigma) B are read off
    the matrix exponential of [[A, B], [0, 0]] * step.
    """
    if step <= 0:
        raise ModelError("step must be positive")
    n = ss.order
    if n == 0:
        return DiscreteStateSpace(np.zeros((0, 0)), np.zeros((0, 1)),
                                  ss.C, ss.D, step)
    blk = np.zeros((n + 1, n + 1))
    blk[:n, :n] = ss.A
    blk[:n, n:] = ss.B
    M = expm(blk * step)
    if not np.all(np.isfinite(M)):
        raise ModelError("matrix exponential did not converge")
    return DiscreteStateSpace(M[:n, :n], M[:n, n:], ss.C, ss.D, step)


@lru_cache(maxsize=256)
def _zoh_cached(num: tuple, den: tuple, step: float) -> DiscreteStateSpace:
    tf = TransferFunction(np.array(num), np.array(den))
    return zoh_discretize(to_state_space(tf), step)


def discretize_tf(tf: TransferFunction, step: float) -> DiscreteStateSpace:
    """Cached helper: ZOH discretization straight from a transfer function."""
    return _zoh_cached(*tf._key(), float(step))


def step_response(ss: StateSpace, times: Sequence[float]) -> np.ndarray:
    """Unit-step response h(t) on an ascending grid of times; h(0) = D.

    The state is advanced with exact per-interval ZOH transitions (the input
    is constant), so irregular grids are allowed.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ModelError("times must be a nonempty 1-D sequence")
    if t[0] < 0 or np.any(np.diff(t) <= 0):
        raise ModelError("times must be non-negative and strictly ascending")
    n = ss.order
    out = np.empty(t.size)
    if n == 0:
        out[:] = ss.D
        return out
    x = np.zeros(n)
    trans = {}
    prev = 0.0
    for i, ti in enumerate(t):
        dt = ti - prev
        if dt > 0:
            if dt not in trans:
                d = zoh_discretize(ss, dt)
                trans[dt] = (d.Ad, d.Bd[:, 0])
            Ad, Bd = trans[dt]
            x = Ad @ x + Bd
        out[i] = ss.C[0] @ x + ss.D
        prev = ti
    return out


def frequency_response(model: Union[TransferFunction, StateSpace],
                       omega: float) -> complex:
    """Evaluate the model at s = i*omega.

    Accepts either representation so responses can be cross-checked between
    the rational form and its realization.
    """
    if omega < 0:
        raise ModelError("omega must be non-negative")
    s = 1j * float(omega)
    if isinstance(model, TransferFunction):
        return model(s)
    n = model.order
    if n == 0:
        return complex(model.D)
    try:
        x = np.linalg.solve(s * np.eye(n) - model.A, model.B)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"pole on the imaginary axis at omega = {omega}") from exc
    return complex((model.C @ x)[0, 0] + model.D)
