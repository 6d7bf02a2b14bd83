"""Finite-horizon lifted form of a sampled model.

The map from held drive values (r_0..r_{N-1}) to outputs at the sampling
instants (u(tau)..u(N tau)) is lower-triangular Toeplitz in the step-response
increments m_i = h(i tau) - h((i-1) tau) (with h taken as zero before t = 0,
so any feedthrough lands in m_1).  Inversion is plain forward substitution;
no improper inverse system is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ModelError, OverflowGuardError, SingularityError
from .lti import TransferFunction, discretize_tf

SINGULAR_TOL = 1e-12
DEFAULT_GUARD = 1e6


@dataclass(frozen=True)
class LiftedModel:
    """First column (markov) of the lower-triangular Toeplitz sample map."""

    markov: np.ndarray
    period: float
    horizon: int

    def __post_init__(self):
        m = np.asarray(self.markov, dtype=float).copy()
        if m.ndim != 1 or m.size != self.horizon or self.horizon < 1:
            raise ModelError("markov length must equal the horizon")
        if not self.period > 0:
            raise ModelError("period must be positive")
        m.setflags(write=False)
        object.__setattr__(self, "markov", m)

    def as_matrix(self) -> np.ndarray:
        """Dense N x N lower-triangular Toeplitz matrix (for analysis)."""
        N = self.horizon
        L = np.zeros((N, N))
        for j in range(N):
            L[j:, j] = self.markov[: N - j]
        return L

    def apply(self, r) -> np.ndarray:
        """Map drive values to sample-point outputs."""
        r = np.asarray(r, dtype=float)
        if r.shape != (self.horizon,):
            raise ModelError(f"expected {self.horizon} drive values, got {r.shape}")
        return kernels.toeplitz_apply(self.markov, r)

    def deconvolve(self, target, guard: float = DEFAULT_GUARD) -> np.ndarray:
        """Drive values reproducing the target outputs (forward substitution).

        Raises OverflowGuardError if any solved value is non-finite or
        exceeds guard in magnitude -- the signature of inverting a
        non-minimum-phase model over too long a horizon.
        """
        target = np.asarray(target, dtype=float)
        if target.shape != (self.horizon,):
            raise ModelError(f"expected {self.horizon} target values, got {target.shape}")
        if abs(self.markov[0]) < SINGULAR_TOL:
            raise SingularityError(
                f"lifted model is singular: |m1| = {abs(self.markov[0]):.3e}")
        r, bad = kernels.toeplitz_solve(self.markov, target, float(guard))
        if bad >= 0:
            raise OverflowGuardError(
                f"deconvolved drive exceeds guard {guard:g} at sample {bad} "
                f"(value {r[bad]:.6g})", index=bad, value=float(r[bad]))
        return r


def build_lifted(model: TransferFunction, tau: float, horizon: int) -> LiftedModel:
    """Lifted sample map of a model at period tau over the given horizon.

    The markov coefficients come from the exact ZOH step response, so the map
    agrees with the fine-grid simulator at every sampling instant.
    """
    if not tau > 0:
        raise ModelError("tau must be positive")
    N = int(horizon)
    if N < 1:
        raise ModelError("horizon must be >= 1")
    dss = discretize_tf(model, tau)
    h = kernels.simulate_held(dss.Ad, dss.Bd, dss.C, dss.D, np.ones(N), 1)
    markov = np.diff(h)
    markov[0] = h[1]  # response taken as zero before t = 0: feedthrough folds into m1
    if abs(markov[0]) < SINGULAR_TOL:
        raise SingularityError(
            f"model has no response over one period: |m1| = {abs(markov[0]):.3e}")
    return LiftedModel(markov, float(tau), N)
