"""Stability pre-checks, inter-sample oscillation fits, and parameter sweeps.

A calibrated drive matches the target at the sampling instants but rings in
between; the routines here quantify that ringing (damped-sine fit, overshoot
and decay-time sweeps over plant time constants) and predict the stability of
the learning loop from the phase mismatch between true and reference models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .csvio import fmt, write_csv
from .errors import ModelError, NoOscillationError, PulsecalError
from .ilc import CONVERGED, CalibrationConfig, run_calibration
from .lti import TransferFunction, from_time_constants, frequency_response
from .plant import Plant
from .signals import DesiredSignal, FineTrajectory, staircase_from_desired

STABLE = "stable"
MARGINAL = "marginal"
UNSTABLE = "unstable"

PHASE_LIMIT_DEG = 90.0
MARGIN_GUARD_DEG = 10.0
EXTREMUM_FLOOR = 1e-9


@dataclass(frozen=True)
class PhaseComparison:
    """Unwrapped phase curves of two models over a frequency band (degrees)."""

    frequencies: np.ndarray
    phase_true: np.ndarray
    phase_model: np.ndarray
    max_abs_difference: float
    stable_prediction: bool
    verdict: str

    @property
    def difference(self) -> np.ndarray:
        return self.phase_true - self.phase_model


@dataclass(frozen=True)
class OscillationFit:
    """Parameters of target + A*exp(-t/decay_time)*sin(2*pi*t/period)."""

    overshoot_amplitude: float
    decay_time: float
    period: float
    residual: float  # RMS misfit over the fitted window, never hidden


@dataclass(frozen=True)
class SweepGrid:
    """Overshoot and decay-time maps over second-order time constants."""

    t1_values: np.ndarray
    t2_values: np.ndarray
    overshoot: np.ndarray
    decay_time: np.ndarray
    n_failed: int


def phase_stability_check(true_plant: TransferFunction,
                          reference: TransferFunction, tau: float,
                          n_samples: int = 100, n_points: int = 200) -> PhaseComparison:
    """Compare model phases over a band up to the Nyquist rate pi/tau.

    The band spans [2*pi/(10*N*tau), pi/tau] on a log grid; phases are
    unwrapped by continuity.  The loop is predicted stable when the largest
    phase mismatch stays below 90 degrees; within a 10-degree guard band of
    that limit the verdict is 'marginal' (oscillatory, near the border).
    """
    if tau <= 0:
        raise ModelError("tau must be positive")
    lo = 2.0 * np.pi / (10.0 * n_samples * tau)
    hi = np.pi / tau
    omega = np.geomspace(lo, hi, n_points)
    resp_true = np.array([frequency_response(true_plant, w) for w in omega])
    resp_model = np.array([frequency_response(reference, w) for w in omega])
    ph_true = np.degrees(np.unwrap(np.angle(resp_true)))
    ph_model = np.degrees(np.unwrap(np.angle(resp_model)))
    max_diff = float(np.max(np.abs(ph_true - ph_model)))
    stable = max_diff < PHASE_LIMIT_DEG
    if not stable:
        verdict = UNSTABLE
    elif max_diff >= PHASE_LIMIT_DEG - MARGIN_GUARD_DEG:
        verdict = MARGINAL
    else:
        verdict = STABLE
    return PhaseComparison(omega, ph_true, ph_model, max_diff, stable, verdict)


def _local_extrema(t: np.ndarray, d: np.ndarray):
    """Indices of strict sign changes in the discrete derivative."""
    s = np.sign(np.diff(d))
    # carry the last nonzero slope sign through flat segments
    for i in range(1, s.size):
        if s[i] == 0:
            s[i] = s[i - 1]
    idx = np.flatnonzero(s[1:] * s[:-1] < 0) + 1
    return idx


def fit_oscillation(traj: FineTrajectory, settle_target: float) -> OscillationFit:
    """Fit the inter-sample ringing after the first sampling period.

    Initial estimates come from the local extrema of u(t) - settle_target for
    t > tau: the period is twice the mean extremum spacing, the decay time is
    a linear fit of log|peak| against time, and the amplitude extrapolates
    that envelope back to t = 0.  A damped least-squares pass on
    f(t) = settle_target + A*exp(-t/Ts)*sin(2*pi*t/T) then refines all three;
    the RMS residual of that pass is reported alongside.

    Raises NoOscillationError when fewer than three extrema exceed a 1e-9
    floor (first-order responses are flat after the first period).
    """
    tau = traj.period
    t_all = traj.times
    mask = t_all > tau
    t = t_all[mask]
    d = traj.values[mask] - settle_target
    idx = _local_extrema(t, d)
    idx = idx[np.abs(d[idx]) > EXTREMUM_FLOOR]
    if idx.size < 3:
        raise NoOscillationError(
            f"only {idx.size} usable extrema above {EXTREMUM_FLOOR:g}")
    t_ext = t[idx]
    peaks = np.abs(d[idx])
    period0 = 2.0 * float(np.mean(np.diff(t_ext)))
    slope, intercept = np.polyfit(t_ext, np.log(peaks), 1)
    decay0 = -1.0 / slope if slope < 0 else float(t_ext[-1] - t_ext[0])
    amp0 = float(np.exp(intercept))

    def model(tt, amp, decay, period):
        return settle_target + amp * np.exp(-tt / decay) * np.sin(2 * np.pi * tt / period)

    try:
        popt, _ = curve_fit(model, t, traj.values[mask],
                            p0=(amp0, decay0, period0), maxfev=20000)
        amp, decay, period = popt
    except RuntimeError:
        amp, decay, period = amp0, decay0, period0
    if period < 0:  # sin(-x) = -sin(x): fold the sign into the amplitude
        amp, period = -amp, -period
    if decay <= 0 or period <= 0:
        raise NoOscillationError("refined envelope does not decay")
    residual = float(np.sqrt(np.mean((model(t, amp, decay, period)
                                      - traj.values[mask]) ** 2)))
    return OscillationFit(float(amp), float(decay), float(period), residual)


def sweep_second_order(t1_values, t2_values, tau: float,
                       config: CalibrationConfig, n_samples: int = 60) -> SweepGrid:
    """Calibrate 1/((T1 s + 1)(T2 s + 1)) against itself over a grid.

    Using the plant as its own reference isolates inter-sample behavior from
    model error.  Each cell reports overshoot = max(u) - 1 of the calibrated
    trajectory and the fitted ringing decay time; cells whose calibration or
    fit fails are left non-finite and counted.
    """
    t1 = np.asarray(t1_values, dtype=float)
    t2 = np.asarray(t2_values, dtype=float)
    if np.any(t1 <= 0) or np.any(t2 <= 0):
        raise ModelError("time constants must be positive")
    desired = DesiredSignal("step", 1.0)
    overshoot = np.full((t1.size, t2.size), np.nan)
    decay = np.full((t1.size, t2.size), np.nan)
    failed = 0
    for i, T1 in enumerate(t1):
        for j, T2 in enumerate(t2):
            model = from_time_constants([T1, T2])
            result = run_calibration(Plant(model), model, desired, config,
                                     staircase_from_desired(desired, tau, n_samples))
            if result.status != CONVERGED:
                failed += 1
                continue
            u = result.final_trajectory.values
            overshoot[i, j] = float(np.max(u) - 1.0)
            try:
                decay[i, j] = fit_oscillation(result.final_trajectory, 1.0).decay_time
            except NoOscillationError:
                failed += 1
    return SweepGrid(t1, t2, overshoot, decay, failed)


def first_order_exactness(T: float, tau: float, config: CalibrationConfig,
                          n_samples: int = 25) -> float:
    """Largest |u(t) - 1| after the first period for a self-calibrated lag.

    A first-order plant calibrated against itself settles exactly: the drive
    is 1/h(tau) in the first period and a constant thereafter, and the fine
    trajectory is flat beyond t = tau.  Returns the max deviation on
    t in (tau, N*tau]; raises if the steady drive levels disagree beyond 1e-9
    (the first level legitimately differs -- it supplies the initial kick).
    """
    if T < 0 or tau <= 0:
        raise ModelError("T must be non-negative and tau positive")
    # T = 0 degenerates to a pure unit gain
    model = from_time_constants([T] if T > 0 else [])
    desired = DesiredSignal("step", 1.0)
    result = run_calibration(Plant(model), model, desired, config,
                             staircase_from_desired(desired, tau, n_samples))
    r = result.final_awg.values
    if r.size > 2 and float(np.ptp(r[1:])) > 1e-9:
        raise PulsecalError(
            f"steady drive levels differ by {np.ptp(r[1:]):.3e} (> 1e-9)")
    traj = result.final_trajectory
    after = traj.times > tau
    return float(np.max(np.abs(traj.values[after] - desired.amplitude)))


def write_phase_csv(pc: PhaseComparison, path) -> None:
    write_csv(path, ("omega", "phase_true", "phase_model", "difference"),
              zip(pc.frequencies, pc.phase_true, pc.phase_model, pc.difference))


def write_sweep_csvs(grid: SweepGrid, overshoot_path, decay_path) -> None:
    """Grids as CSV with T2 values across the header row, T1 down the first column."""
    for path, data in ((overshoot_path, grid.overshoot), (decay_path, grid.decay_time)):
        header = ["t1\\t2"] + [fmt(v) for v in grid.t2_values]
        rows = ([t1] + list(row) for t1, row in zip(grid.t1_values, data))
        write_csv(path, header, rows)
