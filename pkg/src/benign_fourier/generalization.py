"""Closed-form generalization error of the minimum-norm interpolant, the
special cases used as sanity anchors, the hat-weight construction that
overfits benignly, and upper bounds on both error terms.

All errors are expectations over uniform ``x`` on [0, 1] and over zero-mean
noise of variance ``sigma_sq`` added independently at each grid point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgumentError, NonInterpolableError
from .interpolator import WeightProfile, alias_weight_sums
from .spectra import FourierSeries, _require_odd, residue, symmetric_spectrum

DEFAULT_HAT_C = 0.95


@dataclass(frozen=True)
class TargetSpec:
    """Band-limited real target given by its Fourier coefficients."""

    series: FourierSeries

    def __post_init__(self):
        if not isinstance(self.series, FourierSeries):
            object.__setattr__(self, "series", FourierSeries(self.series))
        scale = max(1.0, max((abs(v) for v in self.series.coeffs.values()), default=0.0))
        if not self.series.is_conjugate_symmetric(atol=1e-12 * scale):
            raise InvalidArgumentError("target coefficients must satisfy g[-k] = conj(g[k])")

    @property
    def power(self):
        return self.series.power()

    @property
    def bandwidth(self):
        """Smallest odd ``n0`` whose symmetric spectrum contains the support."""
        freqs = self.series.frequencies
        return 2 * int(np.max(np.abs(freqs), initial=0)) + 1

    @classmethod
    def zero(cls):
        return cls(FourierSeries({}))

    @classmethod
    def tone(cls, p, amplitude=1.0):
        """``g(x) = 2 amplitude cos(2 pi p x)`` for real amplitude, so ``|g_p|`` is ``amplitude``."""
        if p == 0:
            return cls(FourierSeries({0: amplitude}))
        a = complex(amplitude)
        return cls(FourierSeries({p: a, -p: a.conjugate()}))


@dataclass(frozen=True)
class ErrorReport:
    var: float
    bias_sq: float
    total: float = field(init=False)
    mc_estimate: float | None = None
    mc_stderr: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "total", self.var + self.bias_sq)

    def with_monte_carlo(self, estimate, stderr):
        return ErrorReport(self.var, self.bias_sq, estimate, stderr)

    def within(self, nsigma=3.0):
        """Whether the closed-form total lies within ``nsigma`` standard errors of the estimate."""
        if self.mc_estimate is None:
            raise InvalidArgumentError("no Monte Carlo estimate attached")
        return abs(self.total - self.mc_estimate) <= nsigma * self.mc_stderr


def _check_target_in_band(target: TargetSpec, n):
    half = (n - 1) // 2
    outside = [k for k in target.series.coeffs if abs(k) > half]
    if outside:
        raise InvalidArgumentError(f"target frequencies {sorted(outside)} exceed the sample band of n={n}")


def closed_form_error(weights: WeightProfile, target: TargetSpec, n, sigma_sq) -> ErrorReport:
    """Exact variance and squared bias of the minimum-norm fit on ``n`` grid points."""
    n = _require_odd(n, "n")
    if sigma_sq < 0:
        raise InvalidArgumentError("sigma_sq must be nonnegative")
    _check_target_in_band(target, n)
    half = (n - 1) // 2
    q = alias_weight_sums(weights, n)
    q2 = alias_weight_sums(weights, n, power=2)
    empty = np.flatnonzero(q <= 0)
    if len(empty):
        raise NonInterpolableError(int(empty[0]) - half)

    var = sigma_sq / n * float(np.sum(q2 / q**2))

    bias = 0.0
    for k, g in target.series.coeffs.items():
        if g == 0:
            continue
        nu = weights[k]
        Q, Q2 = q[k + half], q2[k + half]
        bias += abs(g) ** 2 * ((Q - nu) ** 2 + (Q2 - nu**2)) / Q**2
    return ErrorReport(var, float(max(bias, 0.0)))


def noise_only_error(n, m, sigma_sq):
    """Error of fitting pure noise with ``d = n(m+1)`` uniformly weighted features.

    Note: the ``1/n``-normalized DFT fixes this at ``sigma_sq/(m+1)``, without an
    extra factor of ``1/n``.
    """
    _require_odd(n, "n")
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    return sigma_sq / (m + 1)


def signal_only_error(g_p_sq, m):
    """Error of fitting one noiseless tone with ``d = n(m+1)`` uniform features."""
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    return g_p_sq * m / (m + 1)


def hat_weights(n0, d, c=DEFAULT_HAT_C) -> WeightProfile:
    """Mass ``c`` spread evenly on the target band, ``1 - c`` on the rest of ``Omega_d``."""
    n0 = _require_odd(n0, "n0")
    d = _require_odd(d, "d")
    if d < n0:
        raise InvalidArgumentError(f"need n0 <= d, got n0={n0}, d={d}")
    if not 0 < c < 1:
        raise InvalidArgumentError(f"c must lie in (0, 1), got {c}")
    freqs = symmetric_spectrum(d).frequencies
    if d == n0:
        return WeightProfile(freqs, np.full(d, 1.0 / n0))
    head = np.abs(freqs) <= (n0 - 1) // 2
    w = np.where(head, c / n0, (1 - c) / (d - n0))
    return WeightProfile(freqs, w)


class EffectiveRank(NamedTuple):
    value: float
    empty_tail: bool


def head_indices(weights: WeightProfile, p):
    """Positions of the ``p`` largest weights.

    Ties go to smaller ``|k|`` first, then positive before negative ``k``.
    """
    f = weights.frequencies
    order = np.lexsort((-np.sign(f), np.abs(f), -weights.weights))
    return np.sort(order[:p])


def effective_rank(weights: WeightProfile, k, p, n) -> EffectiveRank:
    """``(sum nu)^2 / sum nu^2`` over the aliases of ``k`` outside the top-``p`` weights."""
    n = _require_odd(n, "n")
    if p > n or p < 0:
        raise InvalidArgumentError(f"need 0 <= p <= n, got p={p}, n={n}")
    in_tail = np.ones(len(weights), dtype=bool)
    in_tail[head_indices(weights, p)] = False
    cohort = (weights.frequencies - k) % n == 0
    tail = weights.weights[cohort & in_tail]
    s2 = float(np.sum(tail**2))
    if s2 == 0:
        return EffectiveRank(0.0, True)
    return EffectiveRank(float(np.sum(tail)) ** 2 / s2, False)


def var_upper_bound(weights: WeightProfile, n0, n, sigma_sq):
    """``sigma^2 [n0/n + (1/n) sum_k 1/R^(k)]`` with ``R^(k)`` the effective rank at ``p = n0``.

    Cohorts whose tail is empty contribute nothing to the second term.
    """
    n = _require_odd(n, "n")
    half = (n - 1) // 2
    total = 0.0
    for k in range(-half, half + 1):
        r = effective_rank(weights, k, n0, n)
        if not r.empty_tail:
            total += 1.0 / r.value
    return sigma_sq * (n0 / n + total / n)


@dataclass(frozen=True)
class BoundReport:
    """Bias bound in the published form plus a fully rigorous variant.

    ``value`` is ``sqrt(m/n + m^2 t) * P / zeta^2``. ``strict`` replaces both
    factors by quantities that always dominate: the exact Gershgorin radius and
    the exact ``||alpha_0||^2``. ``warnings`` lists violated assumptions of
    the published form.
    """

    value: float
    strict: float
    m: int
    t: float
    zeta: float
    warnings: tuple = ()


def _alias_levels(weights: WeightProfile, n):
    """Map level ``l`` to the weights of ``k + n l`` for ``k`` in ``Omega_n`` (0 where absent)."""
    half = (n - 1) // 2
    f = weights.frequencies
    res = residue(f, n)
    level = (f - res) // n
    table = {}
    for lv, r, w in zip(level.tolist(), res.tolist(), weights.weights.tolist()):
        table.setdefault(lv, np.zeros(n))[r + half] = w
    return table


def bias_upper_bound(weights: WeightProfile, target: TargetSpec, n, d=None, n0=None, atol=1e-12) -> BoundReport:
    """Upper bounds on the squared bias; ``n0`` defaults to the target bandwidth."""
    n = _require_odd(n, "n")
    _check_target_in_band(target, n)
    warnings = []
    if d is not None and len(weights) != d:
        warnings.append(f"profile has {len(weights)} frequencies, expected d={d}")
    if abs(weights.total() - 1.0) > atol:
        warnings.append(f"weights sum to {weights.total():.6g}, not 1")

    half = (n - 1) // 2
    idx = residue(weights.frequencies, n) + half
    sizes = np.bincount(idx, minlength=n)
    m = int(sizes.max()) - 1
    if np.any(sizes != sizes[0]):
        warnings.append("alias sets have unequal sizes")

    levels = _alias_levels(weights, n)
    t = 0.0
    for lv, row in levels.items():
        if lv != 0:
            t = max(t, float(np.max(np.abs(row - row.mean()))))

    n0 = target.bandwidth if n0 is None else _require_odd(n0, "n0")
    band = np.abs(weights.frequencies) <= (n0 - 1) // 2
    zeta = float(weights.weights[band].sum())
    power = target.power
    if zeta <= 0:
        raise NonInterpolableError(0, "weights vanish on the target band")
    value = math.sqrt(m / n + m * m * t) * power / zeta**2

    # ||alpha_0||^2 for the representation g = sum alpha_0 sqrt(nu) e_k
    alpha0_sq = 0.0
    for k, g in target.series.coeffs.items():
        if g == 0:
            continue
        nu = weights[k]
        if nu <= 0:
            raise NonInterpolableError(k, f"target mode k={k} carries zero weight")
        alpha0_sq += abs(g) ** 2 / nu
    if alpha0_sq > power / zeta**2 * (1 + atol):
        warnings.append("||alpha_0||^2 exceeds P/zeta^2; the published bound may not dominate")

    root = np.sqrt(weights.weights)
    cohort_root = np.bincount(idx, weights=root, minlength=n)
    radius = float(np.max(root * (cohort_root[idx] - root)))
    strict = radius * alpha0_sq
    return BoundReport(value, strict, m, t, zeta, tuple(warnings))


class ScalingRow(NamedTuple):
    n: int
    d: int
    alpha: float
    var: float
    bias_sq: float
    total: float


def odd_at_least(x, floor):
    """Smallest odd integer that is ``>= max(ceil(x), floor)``."""
    v = max(math.ceil(x - 1e-9), floor)
    return v if v % 2 else v + 1


def power_dimension(n, alpha):
    """``d`` close to ``n**alpha``, odd and never below ``n``."""
    if alpha <= 0:
        raise InvalidArgumentError("alpha must be positive")
    return odd_at_least(n**alpha, n)


def odd_multiple_schedule(n, max_ratio):
    """``d = n, 3n, 5n, ...`` up to ``max_ratio * n``: every alias set has the same size."""
    n = _require_odd(n, "n")
    return [n * r for r in range(1, int(max_ratio) + 1, 2)]


def odd_schedule(n, d_max):
    """Every odd ``d`` from ``n`` to ``d_max``."""
    n = _require_odd(n, "n")
    return list(range(n, int(d_max) + 1, 2))


def benign_scaling_curve(n_list: Sequence[int], alpha, n0, c=DEFAULT_HAT_C, target=None, sigma_sq=1.0):
    """Closed-form error of hat-weight models with ``d ~ n**alpha``, one row per ``n``."""
    if target is None:
        target = TargetSpec.tone(1, 0.5)
    rows = []
    for n in n_list:
        d = power_dimension(n, alpha)
        rep = closed_form_error(hat_weights(n0, d, c), target, n, sigma_sq)
        rows.append(ScalingRow(int(n), int(d), float(alpha), rep.var, rep.bias_sq, rep.total))
    return rows


def random_bandlimited_target(n0, rng, power=1.0) -> TargetSpec:
    """Random real target on ``Omega_{n0}`` rescaled to the given signal power."""
    half = (_require_odd(n0, "n0") - 1) // 2
    pos = rng.normal(size=half) + 1j * rng.normal(size=half)
    coeffs = {0: complex(rng.normal())}
    for k, v in enumerate(pos, start=1):
        coeffs[k] = v
        coeffs[-k] = np.conj(v)
    series = FourierSeries(coeffs)
    scale = math.sqrt(power / series.power()) if series.power() > 0 else 0.0
    return TargetSpec(FourierSeries({k: v * scale for k, v in coeffs.items()}))
