"""Diagonal data-encoding Hamiltonians and the frequency spectra they induce.

A strategy is a list of eigenvalues ``lambda``. Its spectrum is the set of
differences ``lambda_l - lambda_m`` and the degeneracy set ``R(k)`` collects the
ordered index pairs realising difference ``k``. Differences are grouped with
exact rational arithmetic so that float round-off never splits a frequency.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError, NotGolombRulerError, UnsupportedError
from .spectra import Spectrum

_MAX_DENOMINATOR = 10**6

# optimal Golomb rulers, keyed by number of marks
KNOWN_GOLOMB_RULERS = {
    1: (0,),
    2: (0, 1),
    3: (0, 1, 3),
    4: (0, 1, 4, 6),
    5: (0, 1, 4, 9, 11),
    6: (0, 1, 4, 10, 12, 17),
    7: (0, 1, 4, 10, 18, 23, 25),
    8: (0, 1, 4, 9, 15, 22, 32, 34),
}


def _integer_levels(eigenvalues) -> np.ndarray:
    """Eigenvalues shifted to start at 0, as exact integers."""
    fracs = []
    for lam in eigenvalues:
        lam = float(lam)
        if not math.isfinite(lam):
            raise InvalidArgumentError("eigenvalues must be finite")
        f = Fraction(lam).limit_denominator(_MAX_DENOMINATOR)
        if abs(float(f) - lam) > 1e-9 * max(1.0, abs(lam)):
            raise UnsupportedError(f"eigenvalue {lam!r} has no small rational representation")
        fracs.append(f)
    base = min(fracs)
    shifted = [f - base for f in fracs]
    if any(s.denominator != 1 for s in shifted):
        raise UnsupportedError("eigenvalue differences are not integers; the spectrum would not be integer")
    return np.array([int(s) for s in shifted], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class DegeneracyMap:
    """``R(k)`` for every frequency: an ``(|R(k)|, 2)`` array of pairs ``(l, m)``."""

    pairs: Mapping[int, np.ndarray]
    dim: int

    @property
    def frequencies(self):
        return np.array(sorted(self.pairs), dtype=np.int64)

    def __getitem__(self, k):
        return self.pairs.get(int(k), np.zeros((0, 2), dtype=np.int64))

    def size(self, k):
        return len(self[k])

    def sizes(self) -> dict:
        return {k: len(v) for k, v in sorted(self.pairs.items())}

    def total(self):
        return sum(len(v) for v in self.pairs.values())


def spectrum_and_degeneracy(eigenvalues) -> tuple[Spectrum, DegeneracyMap]:
    """Enumerate all ``d**2`` ordered pairs and group them by eigenvalue difference."""
    levels = _integer_levels(eigenvalues)
    d = len(levels)
    if d == 0:
        raise InvalidArgumentError("need at least one eigenvalue")
    diff = (levels[:, None] - levels[None, :]).ravel()
    order = np.argsort(diff, kind="stable")
    keys, starts = np.unique(diff[order], return_index=True)
    idx = np.stack(np.divmod(order, d), axis=1)
    groups = np.split(idx, starts[1:])
    pairs = {int(k): g for k, g in zip(keys, groups)}
    return Spectrum(keys), DegeneracyMap(pairs, d)


@dataclass(frozen=True, eq=False)
class EncodingStrategy:
    eigenvalues: np.ndarray
    name: str = "explicit"
    generator: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=float))

    @property
    def dim(self):
        return len(self.eigenvalues)

    def _build(self):
        if "sd" not in self._cache:
            self._cache["sd"] = spectrum_and_degeneracy(self.eigenvalues)
        return self._cache["sd"]

    @property
    def spectrum(self) -> Spectrum:
        return self._build()[0]

    @property
    def degeneracy(self) -> DegeneracyMap:
        return self._build()[1]

    def to_dict(self):
        out = {"name": self.name, "eigenvalues": self.eigenvalues.tolist()}
        if self.generator is not None:
            out["r"] = list(self.generator)
        return out


def separable_eigenvalues(r: Sequence[float]) -> np.ndarray:
    """``lambda_j = 2 (r . bits(j)) - ||r||_1``; bit ``t`` of ``j`` (LSB first) pairs with ``r[t]``."""
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or len(r) < 1:
        raise InvalidArgumentError("generator must be a nonempty vector")
    nq = len(r)
    j = np.arange(2**nq)
    bits = (j[:, None] >> np.arange(nq)[None, :]) & 1
    return 2.0 * bits @ r - np.abs(r).sum()


def separable_strategy(r, name="separable") -> EncodingStrategy:
    return EncodingStrategy(separable_eigenvalues(r), name, tuple(float(v) for v in r))


def hamming_strategy(n_q):
    return separable_strategy([0.5] * n_q, "hamming")


def binary_strategy(n_q):
    return separable_strategy([0.5 * 2**t for t in range(n_q)], "binary")


def ternary_strategy(n_q):
    return separable_strategy([0.5 * 3**t for t in range(n_q)], "ternary")


def contiguous_strategy(d):
    """``diag(0, 1, ..., d-1)``; equals the binary strategy when ``d`` is a power of two."""
    if d < 1:
        raise InvalidArgumentError("d must be positive")
    return EncodingStrategy(np.arange(d, dtype=float), "contiguous")


def _check_nq(n_q):
    if int(n_q) != n_q or n_q < 1:
        raise InvalidArgumentError(f"n_q must be a positive integer, got {n_q!r}")


def hamming_degeneracy(n_q, k):
    _check_nq(n_q)
    if abs(k) > n_q:
        raise InvalidArgumentError(f"k={k} outside the Hamming spectrum for n_q={n_q}")
    return math.comb(2 * n_q, n_q - abs(k))


def binary_degeneracy(n_q, k):
    _check_nq(n_q)
    if abs(k) > 2**n_q - 1:
        raise InvalidArgumentError(f"k={k} outside the binary spectrum for n_q={n_q}")
    return 2**n_q - abs(k)


def shifted_ternary(k, n_q):
    """Balanced-ternary digits of ``k``, least significant first."""
    _check_nq(n_q)
    shift = (3**n_q - 1) // 2
    if abs(k) > shift:
        raise InvalidArgumentError(f"|k| must be at most {shift}, got {k}")
    u = int(k) + shift
    digits = []
    for _ in range(n_q):
        u, rem = divmod(u, 3)
        digits.append(rem - 1)
    return tuple(digits)


def ternary_degeneracy(n_q, k):
    digits = shifted_ternary(k, n_q)
    return 2 ** (n_q - sum(abs(t) for t in digits))


def combinatorial_multiplicity(diff_vector):
    """Number of bitstring pairs ``(i, j)`` with ``j - i`` equal to the given digit vector."""
    v = np.asarray(diff_vector)
    if not np.all(np.isin(v, (-1, 0, 1))):
        raise InvalidArgumentError("difference vector entries must be -1, 0 or 1")
    return 2 ** int(len(v) - np.abs(v).sum())


def golomb_collisions(marks):
    seen = {}
    for i, j in itertools.combinations(range(len(marks)), 2):
        seen.setdefault(abs(marks[j] - marks[i]), []).append((marks[i], marks[j]))
    return {diff: pairs for diff, pairs in seen.items() if len(pairs) > 1}


def golomb_strategy(marks) -> EncodingStrategy:
    """Strategy whose eigenvalues are the marks of a Golomb ruler."""
    marks = [int(m) for m in marks]
    if len(marks) == 0 or any(m < 0 for m in marks):
        raise InvalidArgumentError("marks must be a nonempty list of nonnegative integers")
    if len(set(marks)) != len(marks):
        raise InvalidArgumentError("marks must be distinct")
    collisions = golomb_collisions(marks)
    if collisions:
        raise NotGolombRulerError(collisions)
    return EncodingStrategy(np.array(marks, dtype=float), "golomb")


def known_golomb_strategy(d):
    if d not in KNOWN_GOLOMB_RULERS:
        raise InvalidArgumentError(f"no bundled ruler with {d} marks; pass marks explicitly")
    return golomb_strategy(KNOWN_GOLOMB_RULERS[d])


def frame_operator(n) -> np.ndarray:
    """Rows are all of ``{-1, 0, 1}^n`` in lexicographic order, first coordinate most significant."""
    _check_nq(n)
    return np.array(list(itertools.product((-1, 0, 1), repeat=n)), dtype=float)


def design_hamiltonian(target_frequencies) -> np.ndarray:
    """Least-squares generator ``r`` with ``2 T_n r`` closest to the targets.

    The columns of ``T_n`` are orthogonal with squared norm ``2 * 3**(n-1)``,
    so the pseudoinverse is a rescaled transpose.
    """
    k = np.asarray(target_frequencies, dtype=float)
    n = round(math.log(len(k), 3)) if len(k) > 0 else 0
    if n < 1 or 3**n != len(k):
        raise InvalidArgumentError(f"expected 3**n target values, got {len(k)}")
    T = frame_operator(n)
    return T.T @ k / (4.0 * 3 ** (n - 1))


def strategy_from_config(cfg: Mapping) -> EncodingStrategy:
    """Build a strategy from ``{"type": ..., ...}``.

    Types: ``hamming``/``binary``/``ternary`` (``n_q``), ``separable`` (``r``),
    ``explicit`` (``eigenvalues``), ``golomb`` (``marks`` or ``d``) and
    ``contiguous`` (``d``).
    """
    kind = cfg.get("type")
    try:
        if kind == "hamming":
            return hamming_strategy(int(cfg["n_q"]))
        if kind == "binary":
            return binary_strategy(int(cfg["n_q"]))
        if kind == "ternary":
            return ternary_strategy(int(cfg["n_q"]))
        if kind == "separable":
            return separable_strategy(cfg["r"], cfg.get("name", "separable"))
        if kind == "explicit":
            return EncodingStrategy(np.asarray(cfg["eigenvalues"], dtype=float), cfg.get("name", "explicit"))
        if kind == "golomb":
            if "marks" in cfg:
                return golomb_strategy(cfg["marks"])
            return known_golomb_strategy(int(cfg["d"]))
        if kind == "contiguous":
            return contiguous_strategy(int(cfg["d"]))
    except KeyError as exc:
        raise InvalidArgumentError(f"encoding of type {kind!r} is missing field {exc.args[0]!r}") from None
    raise InvalidArgumentError(f"unknown encoding type {kind!r}")
