"""Simulation and learning-based calibration of piecewise-constant control
waveforms distorted by an LTI channel (optionally with output saturation).

The package models the distortion exactly under zero-order hold, inverts a
reference model in lifted (lower-triangular Toeplitz) form, and iterates the
inverse-model correction until the in-situ signal matches the target at the
sampling instants, with analysis tools for the residual inter-sample ringing
and the stability of the iteration.
"""

from .analysis import (OscillationFit, PhaseComparison, SweepGrid,
                       first_order_exactness, fit_oscillation,
                       phase_stability_check, sweep_second_order)
from .errors import (ConfigError, ModelError, NoOscillationError,
                     OverflowGuardError, PulsecalError, SingularityError)
from .ilc import (AMPLITUDE_CAPPED, CONVERGED, DIVERGED, MAX_ITERATIONS,
                  CalibrationConfig, CalibrationResult, IterationRecord,
                  deconvolution_baseline, error_contraction_check, ilc_update,
                  run_calibration, write_history_csv)
from .kernels import backend as kernel_backend
from .lifted import LiftedModel, build_lifted
from .lti import (DiscreteStateSpace, StateSpace, TransferFunction,
                  frequency_response, from_time_constants,
                  make_transfer_function, step_response, to_state_space,
                  to_transfer_function, zoh_discretize)
from .plant import Nonlinearity, Plant, saturate, simulate
from .signals import (AwgSignal, DesiredSignal, FineTrajectory,
                      accumulated_phase, continuous_error, phase_deviation,
                      ramsey_readout, sample_at_awg_points, sampled_error,
                      staircase_from_desired, write_awg_csv,
                      write_trajectory_csv)

__version__ = "0.1.0"

__all__ = [
    "AMPLITUDE_CAPPED", "AwgSignal", "CONVERGED", "CalibrationConfig",
    "CalibrationResult", "ConfigError", "DIVERGED", "DesiredSignal",
    "DiscreteStateSpace", "FineTrajectory", "IterationRecord", "LiftedModel",
    "MAX_ITERATIONS", "ModelError", "NoOscillationError", "Nonlinearity",
    "OscillationFit", "OverflowGuardError", "PhaseComparison", "Plant",
    "PulsecalError", "SingularityError", "StateSpace", "SweepGrid",
    "TransferFunction", "accumulated_phase", "build_lifted",
    "continuous_error", "deconvolution_baseline", "error_contraction_check",
    "first_order_exactness", "fit_oscillation", "frequency_response",
    "from_time_constants", "ilc_update", "kernel_backend",
    "make_transfer_function", "phase_deviation", "phase_stability_check",
    "ramsey_readout", "run_calibration", "sample_at_awg_points",
    "sampled_error", "saturate", "simulate", "staircase_from_desired",
    "step_response", "sweep_second_order", "to_state_space",
    "to_transfer_function", "write_awg_csv", "write_history_csv",
    "write_trajectory_csv", "zoh_discretize",
]
