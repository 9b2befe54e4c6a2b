"""Minimum-norm interpolating weighted Fourier-features regression.

The model is ``f(x) = sum_k alpha_k sqrt(nu_k) exp(2i pi k x)`` over a weight
profile ``nu``. On the uniform grid the interpolation constraint decouples over
alias classes, which gives the closed-form minimum-norm coefficients

    alpha_{l} = yhat_k sqrt(nu_l) / sum_{j in S(k)} nu_j,   l in S(k).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError, NonInterpolableError
from .spectra import FourierSeries, SampleSet, dft_vector, residue, symmetric_spectrum

# relative size below which a DFT coefficient counts as zero when its alias
# class has no weight
_ZERO_MODE_RTOL = 1e-12


@dataclass(frozen=True)
class WeightProfile:
    """Nonnegative feature weights ``nu_k`` on an integer spectrum."""

    frequencies: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.int64)
        w = np.asarray(self.weights, dtype=float)
        if freqs.shape != w.shape or freqs.ndim != 1:
            raise InvalidArgumentError("frequencies and weights must be 1-d arrays of equal length")
        if len(np.unique(freqs)) != len(freqs):
            raise InvalidArgumentError("frequencies must be distinct")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidArgumentError("weights must be finite and nonnegative")
        order = np.argsort(freqs)
        object.__setattr__(self, "frequencies", freqs[order])
        object.__setattr__(self, "weights", w[order])

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]):
        keys = sorted(mapping)
        return cls(np.array(keys, dtype=np.int64), np.array([mapping[k] for k in keys], dtype=float))

    @classmethod
    def uniform(cls, d, value=1.0):
        freqs = symmetric_spectrum(d).frequencies
        return cls(freqs, np.full(len(freqs), float(value)))

    def __len__(self):
        return len(self.frequencies)

    def __getitem__(self, k):
        idx = np.searchsorted(self.frequencies, k)
        if idx < len(self.frequencies) and self.frequencies[idx] == k:
            return float(self.weights[idx])
        return 0.0

    def as_dict(self):
        return dict(zip(self.frequencies.tolist(), self.weights.tolist()))

    def total(self):
        return float(self.weights.sum())

    def is_symmetric(self, atol=1e-14):
        if not np.array_equal(self.frequencies, -self.frequencies[::-1]):
            return False
        return bool(np.allclose(self.weights, self.weights[::-1], rtol=0, atol=atol))

    def normalized(self):
        return WeightProfile(self.frequencies, self.weights / self.total())


def alias_weight_sums(weights: WeightProfile, n, power=1):
    """``sum_{l in S(k)} nu_l**power`` for every ``k`` in the size-``n`` spectrum."""
    half = (n - 1) // 2
    idx = residue(weights.frequencies, n) + half
    return np.bincount(idx, weights=weights.weights ** power, minlength=n)


@dataclass(frozen=True)
class TrainedModel:
    frequencies: np.ndarray
    alpha: np.ndarray
    weights: WeightProfile
    n: int

    @property
    def fourier_coefficients(self):
        """Coefficients of ``exp(2i pi k x)``, i.e. ``alpha_k sqrt(nu_k)``."""
        return self.alpha * np.sqrt(self.weights.weights)

    @property
    def series(self) -> FourierSeries:
        return FourierSeries.from_arrays(self.frequencies, self.fourier_coefficients)

    def __call__(self, x):
        return evaluate(self, x)


def min_norm_fit(samples, weights: WeightProfile) -> TrainedModel:
    """Minimum-l2-norm coefficients interpolating ``samples`` under ``weights``.

    Args:
        samples: a :class:`SampleSet` or an odd-length array of observations.
        weights: the feature weights; any integer spectrum, gaps allowed.

    Raises:
        NonInterpolableError: a mode with nonzero DFT coefficient has an alias
            class of total weight zero.
    """
    values = samples.values if isinstance(samples, SampleSet) else SampleSet(samples).values
    n = len(values)
    half = (n - 1) // 2
    yhat = dft_vector(values)
    q = alias_weight_sums(weights, n)

    scale = max(np.max(np.abs(yhat)), np.finfo(float).tiny)
    bad = np.flatnonzero((q <= 0) & (np.abs(yhat) > _ZERO_MODE_RTOL * scale))
    if len(bad):
        raise NonInterpolableError(int(bad[0]) - half)

    idx = residue(weights.frequencies, n) + half
    root = np.sqrt(weights.weights)
    alpha = np.zeros(len(weights), dtype=complex)
    live = weights.weights > 0
    alpha[live] = yhat[idx[live]] * root[live] / q[idx[live]]
    return TrainedModel(weights.frequencies, alpha, weights, n)


def evaluate(model: TrainedModel, x):
    """Complex model values ``sum_k alpha_k sqrt(nu_k) exp(2i pi k x)``."""
    x = np.asarray(x, dtype=float)
    phases = np.exp(2j * np.pi * np.multiply.outer(x, model.frequencies))
    return phases @ model.fourier_coefficients


def evaluate_real(model: TrainedModel, x, atol=1e-12):
    """Real part of the model and the largest imaginary residue over ``x``.

    Only valid for models fitted to real data on a symmetric profile; this is
    checked on the coefficients.
    """
    coeffs = model.series
    if not coeffs.is_conjugate_symmetric(atol=atol * max(1.0, float(np.max(np.abs(coeffs.values), initial=0)))):
        raise InvalidArgumentError("model coefficients are not conjugate symmetric; target is not real")
    values = evaluate(model, x)
    return values.real, float(np.max(np.abs(values.imag), initial=0.0))


def build_linear_system(samples, weights: WeightProfile):
    """Fourier-domain design matrix ``X`` and target vector ``yhat``.

    ``X[j, l] = sqrt(nu_l) [l = k_j mod n]`` with rows ordered by ascending
    frequency ``k_j`` of the size-``n`` spectrum and columns following
    ``weights.frequencies``; the interpolation constraint reads ``X alpha = yhat``.
    """
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples)
    n = len(values)
    half = (n - 1) // 2
    rows = residue(weights.frequencies, n) + half
    X = np.zeros((n, len(weights)))
    X[rows, np.arange(len(weights))] = np.sqrt(weights.weights)
    return X, dft_vector(values)
