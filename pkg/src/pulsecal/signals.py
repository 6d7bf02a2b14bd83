"""Waveform containers and error/phase metrics.

An :class:`AwgSignal` is the piecewise-constant generator output (one value
per sampling period); a :class:`FineTrajectory` is the oversampled record of
the signal that actually arrives downstream.  Errors are measured either at
the sampling instants k*tau, k = 1..N (end-of-period convention; t = 0 is
fixed by the initial state, not by the drive) or as an integral over the
whole record.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csvio import write_csv
from .errors import ModelError


@dataclass(frozen=True)
class AwgSignal:
    """Piecewise-constant drive: values[k] held on [k*period, (k+1)*period)."""

    values: np.ndarray
    period: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.ndim != 1 or v.size == 0:
            raise ModelError("AwgSignal needs at least one sample value")
        if not self.period > 0:
            raise ModelError("sampling period must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "period", float(self.period))

    def __len__(self) -> int:
        return self.values.size

    @property
    def duration(self) -> float:
        return self.values.size * self.period

    @property
    def start_times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.period


@dataclass(frozen=True)
class FineTrajectory:
    """Oversampled signal record on t = j*fine_step, j = 0..N*oversampling."""

    values: np.ndarray
    fine_step: float
    oversampling: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.ndim != 1 or v.size < 2:
            raise ModelError("FineTrajectory needs at least two points")
        if not self.fine_step > 0:
            raise ModelError("fine_step must be positive")
        M = int(self.oversampling)
        if M < 1 or (v.size - 1) % M != 0:
            raise ModelError(
                f"length {v.size} does not match oversampling {M} "
                "(must be N*M + 1)"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "fine_step", float(self.fine_step))
        object.__setattr__(self, "oversampling", M)

    @property
    def period(self) -> float:
        """Sampling period of the generating AWG signal."""
        return self.fine_step * self.oversampling

    @property
    def n_periods(self) -> int:
        return (self.values.size - 1) // self.oversampling

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.fine_step

    @property
    def duration(self) -> float:
        return (self.values.size - 1) * self.fine_step


@dataclass(frozen=True)
class DesiredSignal:
    """Target signal u_d(t); the unit step is the only built-in shape."""

    shape: str = "step"
    amplitude: float = 1.0

    def __post_init__(self):
        if self.shape != "step":
            raise ModelError(f"unknown desired-signal shape {self.shape!r}")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0.0, self.amplitude, 0.0)

    def phase(self, t) -> np.ndarray:
        """Integral of the target from 0 to t (ideal accumulated phase)."""
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.clip(t, 0.0, None)

    def samples(self, tau: float, n: int) -> np.ndarray:
        """Target values at the sampling instants k*tau, k = 1..n."""
        return self(np.arange(1, n + 1) * tau)


def staircase_from_desired(desired: DesiredSignal, tau: float, n: int) -> AwgSignal:
    """Initial drive equal to the target held at period starts."""
    return AwgSignal(desired(np.arange(n) * tau), tau)


def sample_at_awg_points(traj: FineTrajectory) -> np.ndarray:
    """Trajectory values at k*tau for k = 1..N (t = 0 excluded)."""
    M = traj.oversampling
    return traj.values[M::M].copy()


def sampled_error(u_samples, ud_samples, tau: float, signed: bool = False) -> float:
    """Sample-point error sum_k |u(k tau) - u_d(k tau)| * tau.

    With signed=True the raw (cancellable) sum is returned instead; the
    absolute version is the default metric because a signed sum can vanish
    while large errors persist.
    """
    u = np.asarray(u_samples, dtype=float)
    ud = np.asarray(ud_samples, dtype=float)
    if u.shape != ud.shape:
        raise ModelError(f"length mismatch: {u.shape} vs {ud.shape}")
    diff = u - ud
    if not signed:
        diff = np.abs(diff)
    return float(diff.sum() * tau)


def continuous_error(traj: FineTrajectory, desired: DesiredSignal) -> float:
    """Trapezoid approximation of the integral of |u(t) - u_d(t)|."""
    f = np.abs(traj.values - desired(traj.times))
    return float(traj.fine_step * (f.sum() - 0.5 * (f[0] + f[-1])))


def accumulated_phase(traj: FineTrajectory) -> FineTrajectory:
    """Cumulative trapezoid integral theta(t) of the trajectory."""
    u = traj.values
    dt = traj.fine_step
    theta = np.empty_like(u)
    theta[0] = 0.0
    np.cumsum(0.5 * dt * (u[1:] + u[:-1]), out=theta[1:])
    return FineTrajectory(theta, dt, traj.oversampling)


def phase_deviation(traj: FineTrajectory, desired: DesiredSignal) -> FineTrajectory:
    """theta(t) - theta_d(t): accumulated phase relative to the ideal ramp."""
    theta = accumulated_phase(traj)
    return FineTrajectory(theta.values - desired.phase(theta.times),
                          theta.fine_step, theta.oversampling)


def ramsey_readout(theta: FineTrajectory) -> np.ndarray:
    """Probe signal cos(theta(t)) for an accumulated-phase trajectory."""
    return np.cos(theta.values)


def write_trajectory_csv(traj: FineTrajectory, path) -> None:
    write_csv(path, ("t", "value"), zip(traj.times, traj.values))


def write_awg_csv(awg: AwgSignal, path) -> None:
    write_csv(path, ("k", "t_start", "value"),
              zip(range(len(awg)), awg.start_times, awg.values))
