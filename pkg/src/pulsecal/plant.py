"""The simulated distortion channel: an LTI stage plus optional saturation.

This module is the single source of "true" outputs; lifted models are only
ever built from reference models, never from trajectories produced here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ModelError
from .lti import TransferFunction, discretize_tf
from .signals import AwgSignal, FineTrajectory

POST_LINEAR = "post_linear"
PRE_LINEAR = "pre_linear"


def saturate(x, bound: float):
    """Odd saturation bound*tanh(x/bound); |result| < bound for finite x."""
    if not bound > 0:
        raise ModelError("saturation bound must be positive")
    return bound * np.tanh(np.asarray(x, dtype=float) / bound)


@dataclass(frozen=True)
class Nonlinearity:
    """Static pointwise stage: 'identity' or tanh 'saturation' with a bound."""

    kind: str = "identity"
    bound: float = np.inf

    def __post_init__(self):
        if self.kind not in ("identity", "saturation"):
            raise ModelError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "saturation" and not self.bound > 0:
            raise ModelError("saturation bound must be positive")

    @classmethod
    def identity(cls) -> "Nonlinearity":
        return cls("identity")

    @classmethod
    def saturation(cls, bound: float) -> "Nonlinearity":
        return cls("saturation", float(bound))

    def __call__(self, x):
        if self.kind == "identity":
            return np.asarray(x, dtype=float)
        return saturate(x, self.bound)


@dataclass(frozen=True)
class Plant:
    """Distortion channel: linear dynamics with the nonlinearity applied
    after them (default) or before them."""

    linear: TransferFunction
    nonlinearity: Nonlinearity = field(default_factory=Nonlinearity.identity)
    placement: str = POST_LINEAR

    def __post_init__(self):
        if self.placement not in (POST_LINEAR, PRE_LINEAR):
            raise ModelError(f"unknown placement {self.placement!r}")

    @property
    def is_linear(self) -> bool:
        return self.nonlinearity.kind == "identity"


def simulate(plant: Plant, r: AwgSignal, oversampling: int) -> FineTrajectory:
    """Fine-grid response to a held drive, from zero initial state.

    The linear stage is discretized exactly (ZOH) at period/oversampling;
    the drive is held across each sampling period.  The static nonlinearity
    acts pointwise on the drive (pre_linear) or on the output (post_linear).
    """
    M = int(oversampling)
    if M < 1:
        raise ModelError("oversampling must be >= 1")
    fine = r.period / M
    dss = discretize_tf(plant.linear, fine)
    u_in = r.values
    if plant.placement == PRE_LINEAR:
        u_in = plant.nonlinearity(u_in)
    y = kernels.simulate_held(dss.Ad, dss.Bd, dss.C, dss.D, u_in, M)
    if plant.placement == POST_LINEAR:
        y = plant.nonlinearity(y)
    return FineTrajectory(y, fine, M)
