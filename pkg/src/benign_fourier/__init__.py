"""Minimum-norm interpolating Fourier-features regression and its single-layer
quantum counterpart, with exact error formulas and brute-force oracles."""

__version__ = "0.1.0"

from .errors import InvalidArgumentError, NonInterpolableError, NotGolombRulerError, UnsupportedError
from .spectra import FourierSeries, SampleSet, Spectrum, alias_set, dft, idft, symmetric_spectrum
from .interpolator import TrainedModel, WeightProfile, build_linear_system, evaluate, evaluate_real, min_norm_fit
from .generalization import (
    ErrorReport,
    TargetSpec,
    bias_upper_bound,
    closed_form_error,
    effective_rank,
    hat_weights,
    noise_only_error,
    signal_only_error,
    var_upper_bound,
)
from .encodings import EncodingStrategy, golomb_strategy, spectrum_and_degeneracy
from .quantum import InputState, Observable, QuantumModel, fourier_weights_from_state, optimal_observable

__all__ = [
    "EncodingStrategy", "ErrorReport", "FourierSeries", "InputState", "InvalidArgumentError",
    "NonInterpolableError", "NotGolombRulerError", "Observable", "QuantumModel", "SampleSet",
    "Spectrum", "TargetSpec", "TrainedModel", "UnsupportedError", "WeightProfile", "alias_set",
    "bias_upper_bound", "build_linear_system", "closed_form_error", "dft", "effective_rank",
    "evaluate", "evaluate_real", "fourier_weights_from_state", "golomb_strategy", "hat_weights",
    "idft", "min_norm_fit", "noise_only_error", "optimal_observable", "signal_only_error",
    "spectrum_and_degeneracy", "symmetric_spectrum", "var_upper_bound",
]
