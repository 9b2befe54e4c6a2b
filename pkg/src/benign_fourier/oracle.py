"""Brute-force reference implementations used to validate the closed forms.

Nothing here reuses the solver code in :mod:`interpolator` or the observable
construction in :mod:`quantum`; each routine builds its result from dense
matrices or random sampling.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .encodings import EncodingStrategy
from .errors import InvalidArgumentError, NonInterpolableError
from .interpolator import WeightProfile
from .quantum import InputState, Observable
from .spectra import SampleSet

NOISE_KINDS = ("gaussian", "uniform", "rademacher")


@dataclass(frozen=True)
class McConfig:
    trials: int = 500
    eval_points: int = 256
    seed: int = 0
    noise_kind: str = "gaussian"
    quadrature: bool = False  # evaluate on an equispaced grid instead of random x
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 2:
            raise InvalidArgumentError("need at least 2 trials for a standard error")
        if self.eval_points < 1:
            raise InvalidArgumentError("eval_points must be positive")
        if self.noise_kind not in NOISE_KINDS:
            raise InvalidArgumentError(f"noise_kind must be one of {NOISE_KINDS}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must fit in 64 unsigned bits")

    @property
    def acceptance_grade(self):
        return self.trials >= 100


def trial_generators(seed, count):
    """Independent Philox streams, one per trial, derived from a master seed."""
    return [np.random.Generator(np.random.Philox(s)) for s in np.random.SeedSequence(seed).spawn(count)]


def draw_noise(rng, kind, sigma, size):
    if kind == "gaussian":
        return sigma * rng.standard_normal(size)
    if kind == "uniform":
        return sigma * math.sqrt(3.0) * rng.uniform(-1.0, 1.0, size)
    if kind == "rademacher":
        return sigma * rng.choice((-1.0, 1.0), size)
    raise InvalidArgumentError(f"unknown noise kind {kind!r}")


def _dense_design(weights: WeightProfile, n):
    omega = np.exp(2j * np.pi / n)
    j = np.arange(n)
    return np.sqrt(weights.weights)[None, :] * omega ** np.outer(j, weights.frequencies)


def _analysis_matrix(n):
    half = (n - 1) // 2
    p = np.arange(-half, half + 1)
    return np.exp(-2j * np.pi * np.outer(p, np.arange(n)) / n) / n


def pinv_min_norm(samples, weights: WeightProfile) -> np.ndarray:
    """``X^H (X X^H)^{-1} yhat`` with ``X`` formed densely from the feature matrix.

    ``X X^H`` is diagonal on the uniform grid, so only its diagonal is inverted.
    """
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples)
    n = len(values)
    if n % 2 == 0:
        raise InvalidArgumentError("grid size must be odd")
    F = _analysis_matrix(n)
    X = F @ _dense_design(weights, n)
    yhat = F @ values
    gram = np.real(np.einsum("ij,ij->i", X, X.conj()))
    tiny = 1e-12 * max(1.0, float(np.max(gram)))
    scale = max(float(np.max(np.abs(yhat))), np.finfo(float).tiny)
    inv = np.zeros(n)
    for p in range(n):
        if gram[p] > tiny:
            inv[p] = 1.0 / gram[p]
        elif abs(yhat[p]) > 1e-12 * scale:
            raise NonInterpolableError(p - (n - 1) // 2)
    return X.conj().T @ (inv * yhat)


def pinv_model(weights: WeightProfile):
    """Model factory: samples to a callable built on :func:`pinv_min_norm`."""
    freqs = weights.frequencies
    root = np.sqrt(weights.weights)

    def factory(values):
        coeffs = pinv_min_norm(values, weights) * root

        def f(x):
            return np.exp(2j * np.pi * np.multiply.outer(np.asarray(x, dtype=float), freqs)) @ coeffs

        return f

    return factory


class McResult(NamedTuple):
    estimate: float
    stderr: float


def monte_carlo_error(model_factory: Callable, target, sigma, cfg: McConfig, n) -> McResult:
    """Average squared error over fresh noise draws and uniform evaluation points.

    ``model_factory`` maps the noisy sample vector to a callable model and
    ``target`` is any callable ``g(x)`` (a :class:`FourierSeries` works).
    """
    g = target.series if hasattr(target, "series") else target
    grid = np.arange(n) / n
    clean = np.asarray(g(grid))
    if np.iscomplexobj(clean) and np.max(np.abs(clean.imag), initial=0) < 1e-12:
        clean = clean.real
    gens = trial_generators(cfg.seed, cfg.trials)

    def one(rng):
        y = clean + draw_noise(rng, cfg.noise_kind, sigma, n)
        f = model_factory(y)
        if cfg.quadrature:
            x = np.arange(cfg.eval_points) / cfg.eval_points
        else:
            x = rng.random(cfg.eval_points)
        return float(np.mean(np.abs(f(x) - g(x)) ** 2))

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            losses = np.array(list(pool.map(one, gens)))
    else:
        losses = np.array([one(r) for r in gens])
    return McResult(float(losses.mean()), float(losses.std(ddof=1) / math.sqrt(len(losses))))


class Expectation(NamedTuple):
    value: np.ndarray
    imag_residue: float


def statevector_expectation(encoding: EncodingStrategy, state: InputState, observable: Observable, x) -> Expectation:
    """``<Gamma| S(x)^dag M S(x) |Gamma>`` with ``S(x) = diag(exp(2i pi lambda x))``."""
    d = encoding.dim
    if state.dim != d or observable.dim != d:
        raise InvalidArgumentError("encoding, state and observable dimensions differ")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.exp(2j * np.pi * np.outer(x, encoding.eigenvalues)) * state.amplitudes[None, :]
    vals = np.einsum("xi,ij,xj->x", psi.conj(), observable.matrix, psi)
    return Expectation(vals.real, float(np.max(np.abs(vals.imag), initial=0.0)))


def haar_state_sample(d, rng) -> InputState:
    """First column of a Haar unitary, via a normalized complex Gaussian vector."""
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return InputState(z / np.linalg.norm(z))


def haar_probabilities(d, count, rng):
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    p = np.abs(z) ** 2
    return p / p.sum(axis=1, keepdims=True)


class HaarStat(NamedTuple):
    mean: float
    variance: float
    mean_stderr: float
    variance_stderr: float


_HAAR_CHUNK = 1000


def haar_weight_samples(encoding: EncodingStrategy, samples_count, seed):
    """``(samples_count, |Omega|)`` array of weights for Haar-random states.

    States are drawn in fixed-size chunks, each from its own stream, so the
    result depends only on ``seed`` and ``samples_count``.
    """
    d = encoding.dim
    chunks = -(-samples_count // _HAAR_CHUNK)
    gens = trial_generators(seed, chunks)
    P = np.concatenate(
        [haar_probabilities(d, min(_HAAR_CHUNK, samples_count - i * _HAAR_CHUNK), g) for i, g in enumerate(gens)]
    )
    deg = encoding.degeneracy
    freqs = encoding.spectrum.frequencies
    return np.stack([np.sum(P[:, deg[k][:, 0]] * P[:, deg[k][:, 1]], axis=1) for k in freqs.tolist()], axis=1)


def haar_weight_stats(encoding: EncodingStrategy, samples_count, seed) -> dict:
    """Empirical mean and variance of every ``nu_k`` with their standard errors."""
    if samples_count < 2:
        raise InvalidArgumentError("need at least 2 samples")
    nu = haar_weight_samples(encoding, samples_count, seed)
    N = len(nu)
    mean = nu.mean(axis=0)
    centred = nu - mean
    m2 = np.mean(centred**2, axis=0)
    m4 = np.mean(centred**4, axis=0)
    var = m2 * N / (N - 1)
    out = {}
    for i, k in enumerate(encoding.spectrum.frequencies.tolist()):
        out[k] = HaarStat(
            float(mean[i]),
            float(var[i]),
            float(math.sqrt(var[i] / N)),
            float(math.sqrt(max(m4[i] - m2[i] ** 2, 0.0) / N)),
        )
    return out


def dirichlet_moment(indices, d):
    """``E[prod p_i]`` for ``p`` uniform on the simplex of dimension ``d``."""
    counts = Counter(indices)
    order = sum(counts.values())
    num = math.prod(math.factorial(c) for c in counts.values())
    den = math.prod(d + i for i in range(order))
    return num / den


def haar_weight_moments_by_counting(encoding: EncodingStrategy, k):
    """Exact mean and variance of ``nu_k`` by summing simplex moments over ``R(k) x R(k)``."""
    d = encoding.dim
    pairs = [tuple(p) for p in encoding.degeneracy[k].tolist()]
    mean = sum(dirichlet_moment(p, d) for p in pairs)
    second = sum(dirichlet_moment(p + q, d) for p in pairs for q in pairs)
    return mean, second - mean * mean
