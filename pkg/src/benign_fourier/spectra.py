"""Frequency-domain primitives: symmetric integer spectra, alias sets, the
uniform sampling grid and the 1/n-normalized discrete Fourier transform.

Conventions used throughout the package:

* A spectrum is a set of signed integer frequencies.
* Samples live on the grid ``x_j = j / n`` for ``j = 0, ..., n - 1`` with ``n`` odd.
* The forward transform is ``yhat_k = (1/n) sum_j y_j exp(-2i pi j k / n)`` for
  ``k`` in the symmetric spectrum of size ``n``, so that
  ``y_j = sum_k yhat_k exp(2i pi k x_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError


def _require_odd(n, name="size"):
    if int(n) != n or n < 1 or n % 2 == 0:
        raise InvalidArgumentError(f"{name} must be a positive odd integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class Spectrum:
    """Ordered set of distinct integer frequencies."""

    frequencies: np.ndarray

    def __post_init__(self):
        freqs = np.unique(np.asarray(self.frequencies, dtype=np.int64))
        object.__setattr__(self, "frequencies", freqs)

    def __len__(self):
        return len(self.frequencies)

    def __iter__(self):
        return iter(int(k) for k in self.frequencies)

    def __contains__(self, k):
        idx = np.searchsorted(self.frequencies, k)
        return idx < len(self.frequencies) and self.frequencies[idx] == k

    def is_symmetric(self):
        return np.array_equal(self.frequencies, -self.frequencies[::-1])

    def is_contiguous(self):
        f = self.frequencies
        return len(f) > 0 and np.all(np.diff(f) == 1)


def symmetric_spectrum(size) -> Spectrum:
    """Contiguous spectrum ``{-(size-1)/2, ..., (size-1)/2}``."""
    size = _require_odd(size)
    half = (size - 1) // 2
    return Spectrum(np.arange(-half, half + 1))


def _as_frequency_array(spectrum) -> np.ndarray:
    if isinstance(spectrum, Spectrum):
        return spectrum.frequencies
    return np.unique(np.asarray(list(spectrum), dtype=np.int64))


def residue(k, n):
    """Representative of ``k mod n`` inside the symmetric spectrum of size ``n``."""
    half = (n - 1) // 2
    return (np.asarray(k) + half) % n - half


def alias_set(k, n, spectrum) -> np.ndarray:
    """All frequencies of ``spectrum`` congruent to ``k`` modulo ``n``, ascending.

    Works for gapped spectra, where the result may be empty.
    """
    n = _require_odd(n, "n")
    freqs = _as_frequency_array(spectrum)
    return freqs[(freqs - k) % n == 0]


def alias_bounds(k, n, d):
    """Number of aliases of ``k`` below and above it in the contiguous spectrum of size ``d``.

    Returns ``(a, b)`` such that the alias set is ``{k + p n : -a <= p <= b}``.
    Only meaningful for ``k`` inside the size-``n`` spectrum and ``d >= n``.
    """
    half_d = (d - 1) // 2
    return (k + half_d) // n, (half_d - k) // n


@dataclass(frozen=True)
class SampleSet:
    """Observations ``y_j`` at ``x_j = j/n`` together with the noise level."""

    values: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values)
        if not np.iscomplexobj(vals):
            vals = vals.astype(np.float64)
        _require_odd(len(vals), "grid size")
        if self.noise_sigma < 0:
            raise InvalidArgumentError("noise_sigma must be nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return len(self.values)

    @property
    def grid(self):
        return uniform_grid(self.n)


def uniform_grid(n) -> np.ndarray:
    n = _require_odd(n, "n")
    return np.arange(n) / n


@dataclass(frozen=True)
class FourierSeries:
    """Sparse Fourier series ``sum_k coeffs[k] exp(2i pi k x)``."""

    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): complex(v) for k, v in dict(self.coeffs).items()}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_arrays(cls, frequencies, values):
        return cls(dict(zip(np.asarray(frequencies).tolist(), np.asarray(values).tolist())))

    @property
    def frequencies(self) -> np.ndarray:
        return np.array(sorted(self.coeffs), dtype=np.int64)

    @property
    def values(self) -> np.ndarray:
        return np.array([self.coeffs[k] for k in sorted(self.coeffs)], dtype=complex)

    def __getitem__(self, k):
        return self.coeffs.get(int(k), 0j)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        freqs = self.frequencies
        if len(freqs) == 0:
            return np.zeros(x.shape, dtype=complex)
        phases = np.exp(2j * np.pi * np.multiply.outer(x, freqs))
        return phases @ self.values

    def power(self):
        return float(np.sum(np.abs(self.values) ** 2))

    def is_conjugate_symmetric(self, atol=1e-12):
        for k, v in self.coeffs.items():
            if abs(v - np.conj(self[-k])) > atol:
                return False
        return True


@lru_cache(maxsize=64)
def _dft_matrix(n):
    half = (n - 1) // 2
    k = np.arange(-half, half + 1)
    j = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, j) / n) / n


def dft_vector(values) -> np.ndarray:
    """Normalized DFT of ``values`` as an array ordered by ascending frequency."""
    values = np.asarray(values)
    n = _require_odd(values.shape[0], "grid size")
    return _dft_matrix(n) @ values


def dft(samples) -> FourierSeries:
    """Normalized forward transform of a :class:`SampleSet` (or raw sample array)."""
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples)
    n = len(values)
    coeffs = dft_vector(values)
    return FourierSeries.from_arrays(symmetric_spectrum(n).frequencies, coeffs)


def idft(series: FourierSeries, n, noise_sigma=0.0) -> SampleSet:
    """Evaluate a series supported on the size-``n`` spectrum at the grid points."""
    n = _require_odd(n, "n")
    half = (n - 1) // 2
    outside = [k for k in series.coeffs if abs(k) > half]
    if outside:
        raise InvalidArgumentError(f"frequencies {outside} lie outside the size-{n} spectrum")
    values = series(uniform_grid(n))
    if series.is_conjugate_symmetric():
        values = values.real
    return SampleSet(values, noise_sigma)

