"""Single-layer quantum models ``f(x) = <Gamma| S(x)^dag M S(x) |Gamma>`` with
``S(x) = exp(2i pi x H)`` for a diagonal encoding ``H``.

The Fourier coefficient at ``k`` is ``sum_{(l,m) in R(k)} gamma_l conj(gamma_m) M[m,l]``.
The Frobenius-minimal interpolating observable induces the same model as the
classical minimum-norm fit with weights ``nu_k = sum_{R(k)} |gamma_l|^2 |gamma_m|^2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .encodings import EncodingStrategy
from .errors import InvalidArgumentError, NonInterpolableError, UnsupportedError
from .interpolator import WeightProfile, alias_weight_sums, min_norm_fit
from .spectra import FourierSeries, SampleSet, dft_vector, residue

_NORM_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class InputState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or len(amp) == 0:
            raise InvalidArgumentError("amplitudes must be a nonempty vector")
        norm = float(np.sum(np.abs(amp) ** 2))
        if abs(norm - 1.0) > _NORM_ATOL:
            raise InvalidArgumentError(f"state is not normalized (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_unnormalized(cls, vec):
        vec = np.asarray(vec, dtype=complex)
        return cls(vec / np.linalg.norm(vec))

    @classmethod
    def uniform(cls, d):
        return cls(np.full(d, 1 / np.sqrt(d), dtype=complex))

    @classmethod
    def basis(cls, d, j=0):
        amp = np.zeros(d, dtype=complex)
        amp[j] = 1.0
        return cls(amp)

    @property
    def dim(self):
        return len(self.amplitudes)

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def to_json(self):
        return json.dumps([[z.real, z.imag] for z in self.amplitudes.tolist()])

    @classmethod
    def from_json(cls, text):
        return cls(_complex_from_pairs(json.loads(text)))


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise InvalidArgumentError("observable must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
        if np.max(np.abs(M - M.conj().T), initial=0.0) > 1e-12 * scale:
            raise InvalidArgumentError("observable is not Hermitian")
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def frobenius_norm(self):
        return float(np.linalg.norm(self.matrix))

    def to_json(self):
        return json.dumps([[[z.real, z.imag] for z in row] for row in self.matrix.tolist()])

    @classmethod
    def from_json(cls, text):
        return cls(np.array([_complex_from_pairs(row) for row in json.loads(text)]))


def _complex_from_pairs(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise InvalidArgumentError("expected a list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _flat_pairs(encoding: EncodingStrategy):
    """All ``(k, l, m)`` triples of the degeneracy map as three aligned arrays."""
    deg = encoding.degeneracy
    ks, ls, ms = [], [], []
    for k, pairs in deg.pairs.items():
        ks.append(np.full(len(pairs), k, dtype=np.int64))
        ls.append(pairs[:, 0])
        ms.append(pairs[:, 1])
    return np.concatenate(ks), np.concatenate(ls), np.concatenate(ms)


@dataclass(frozen=True, eq=False)
class QuantumModel:
    encoding: EncodingStrategy
    state: InputState
    observable: Observable
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.encoding.dim == self.state.dim == self.observable.dim:
            raise InvalidArgumentError("encoding, state and observable dimensions differ")

    @property
    def series(self) -> FourierSeries:
        if "series" not in self._cache:
            ks, ls, ms = _flat_pairs(self.encoding)
            g = self.state.amplitudes
            terms = g[ls] * g[ms].conj() * self.observable.matrix[ms, ls]
            freqs = self.encoding.spectrum.frequencies
            coeffs = np.zeros(len(freqs), dtype=complex)
            np.add.at(coeffs, np.searchsorted(freqs, ks), terms)
            self._cache["series"] = FourierSeries.from_arrays(freqs, coeffs)
        return self._cache["series"]

    @property
    def weights(self) -> WeightProfile:
        return fourier_weights_from_state(self.encoding, self.state)

    def __call__(self, x):
        return self.series(x)


def fourier_weights_from_state(encoding: EncodingStrategy, state: InputState) -> WeightProfile:
    if encoding.dim != state.dim:
        raise InvalidArgumentError("encoding and state dimensions differ")
    p = state.probabilities
    freqs = encoding.spectrum.frequencies
    deg = encoding.degeneracy
    nu = np.array([np.sum(p[deg[k][:, 0]] * p[deg[k][:, 1]]) for k in freqs.tolist()])
    return WeightProfile(freqs, nu)


def _real_sample_values(samples):
    values = samples.values if isinstance(samples, SampleSet) else SampleSet(samples).values
    if np.iscomplexobj(values):
        if np.max(np.abs(values.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(values))):
            raise InvalidArgumentError("a Hermitian observable can only interpolate real samples")
        values = values.real
    return values


def optimal_observable(samples, encoding: EncodingStrategy, state: InputState) -> Observable:
    """Minimum-Frobenius-norm Hermitian ``M`` whose model interpolates real samples."""
    values = _real_sample_values(samples)
    if encoding.dim != state.dim:
        raise InvalidArgumentError("encoding and state dimensions differ")
    if np.any(np.abs(state.amplitudes) == 0):
        raise InvalidArgumentError("all state amplitudes must be nonzero")
    n = len(values)
    half = (n - 1) // 2
    yhat = dft_vector(values)
    nu = fourier_weights_from_state(encoding, state)
    norms = alias_weight_sums(nu, n)

    scale = max(float(np.max(np.abs(yhat))), np.finfo(float).tiny)
    bad = np.flatnonzero((norms <= 0) & (np.abs(yhat) > 1e-12 * scale))
    if len(bad):
        raise NonInterpolableError(int(bad[0]) - half)

    coef = np.zeros(n, dtype=complex)
    live = norms > 0
    coef[live] = yhat[live] / norms[live]

    ks, ls, ms = _flat_pairs(encoding)
    g = state.amplitudes
    M = np.zeros((encoding.dim, encoding.dim), dtype=complex)
    M[ms, ls] = coef[residue(ks, n) + half] * g[ms] * g[ls].conj()
    # exact solution is Hermitian for real data; this only removes round-off
    return Observable((M + M.conj().T) / 2)


def fit_quantum_model(samples, encoding: EncodingStrategy, state: InputState) -> QuantumModel:
    return QuantumModel(encoding, state, optimal_observable(samples, encoding, state))


def simplified_model_fit(samples, encoding: EncodingStrategy) -> QuantumModel:
    """Uniform-state model built through the classical fit with ``nu_k = |R(k)|/d^2``.

    Every entry of ``R(k)`` in the observable is set to ``alpha_k / sqrt(|R(k)|)``.
    """
    values = _real_sample_values(samples)
    d = encoding.dim
    sizes = encoding.degeneracy.sizes()
    freqs = np.array(list(sizes), dtype=np.int64)
    counts = np.array(list(sizes.values()), dtype=float)
    fit = min_norm_fit(values, WeightProfile(freqs, counts / d**2))
    alpha = dict(zip(freqs.tolist(), fit.alpha))

    M = np.zeros((d, d), dtype=complex)
    for k, pairs in encoding.degeneracy.pairs.items():
        M[pairs[:, 1], pairs[:, 0]] = alpha[k] / np.sqrt(len(pairs))
    return QuantumModel(encoding, InputState.uniform(d), Observable((M + M.conj().T) / 2))


def haar_mean_weight(encoding: EncodingStrategy, k):
    """Average of ``nu_k`` over Haar-random input states."""
    if k not in encoding.spectrum:
        raise InvalidArgumentError(f"k={k} is not in the spectrum")
    d = encoding.dim
    return (encoding.degeneracy.size(k) + d * (k == 0)) / (d * (d + 1))


def _haar_denominator(d):
    return (d + 3) * (d + 2) * (d + 1) * d


def haar_weight_variance(strategy, k, d):
    """Variance of ``nu_k`` over Haar-random states for ``k != 0``.

    ``strategy`` is ``"binary"`` (eigenvalues ``0..d-1``) or ``"golomb"``.
    """
    name = strategy.name if isinstance(strategy, EncodingStrategy) else str(strategy)
    if k == 0:
        raise UnsupportedError("closed-form variance is only available for k != 0")
    D = _haar_denominator(d)
    mean_denom = d * (d + 1)
    if name in ("binary", "contiguous"):
        if abs(k) >= d:
            raise InvalidArgumentError(f"k={k} outside the spectrum for d={d}")
        r = d - abs(k)
        chains = max(d - 2 * abs(k), 0)
        second = (4 * r + 4 * chains + (r * r - r - 2 * chains)) / D
        return second - (r / mean_denom) ** 2
    if name == "golomb":
        return (3 * d * d - d - 6) / (D * mean_denom)
    raise UnsupportedError(f"no closed-form weight variance for strategy {name!r}")


def rebalanced_hamming_state(state: InputState, n_q) -> InputState:
    """Average the probabilities within each Hamming-weight class of the basis labels."""
    d = state.dim
    if d != 2**n_q:
        raise InvalidArgumentError(f"state dimension {d} is not 2**{n_q}")
    weight = np.array([bin(j).count("1") for j in range(d)])
    p = state.probabilities
    class_mean = np.bincount(weight, weights=p) / np.bincount(weight)
    return InputState(np.sqrt(class_mean[weight]).astype(complex))


def _benign_params(n0, d, a):
    if d % 2 or d <= 0:
        raise InvalidArgumentError(f"d must be a positive even integer, got {d}")
    if (n0 + 1) % 4:
        raise InvalidArgumentError(f"need (n0 + 1) divisible by 4, got n0={n0}")
    block = (n0 + 1) // 2
    if not 0 <= a <= 1 / block:
        raise InvalidArgumentError(f"a must lie in [0, {1 / block}], got {a}")
    if d <= block:
        raise InvalidArgumentError(f"d={d} too small for n0={n0}")
    b = (1 - block * a) / (d - block)
    return block, b


def benign_state(n0, d, a) -> InputState:
    """Probability ``a`` on a central block of ``(n0+1)/2`` levels, ``b`` elsewhere."""
    block, b = _benign_params(n0, d, a)
    c1 = d // 2 - block // 2
    p = np.full(d, b)
    p[c1 : c1 + block] = a
    return InputState(np.sqrt(p).astype(complex))


def benign_state_weights(n0, d, a) -> WeightProfile:
    """Weights induced by :func:`benign_state` on ``diag(0..d-1)``, in closed form."""
    block, b = _benign_params(n0, d, a)
    if d < 3 * block:
        raise InvalidArgumentError(f"closed form needs d >= 3(n0+1)/2, got d={d}")
    c1 = d // 2 - block // 2
    c2 = d // 2 + block // 2
    k = np.arange(d, dtype=float)
    nu = np.where(
        k < block,
        (d - block - 2 * k) * b * b + 2 * k * a * b + (block - k) * a * a,
        np.where(
            k < c1,
            (d - 2 * block - k) * b * b + 2 * block * a * b,
            np.where(k < c2, (k - block) * b * b + (d + block - 2 * k) * a * b, (d - k) * b * b),
        ),
    )
    freqs = np.arange(-(d - 1), d)
    return WeightProfile(freqs, np.concatenate([nu[:0:-1], nu]))
