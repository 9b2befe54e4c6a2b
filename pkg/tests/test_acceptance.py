"""Acceptance checks 1-10.

Each check returns ``(passed, detail)`` and is timed against its budget. Under
pytest every check prints one ``PASS``/``FAIL`` line; run this file directly
to get the same lines without pytest.
"""
import math
import sys
import time

import numpy as np
import pytest

from benign_fourier.encodings import (
    binary_degeneracy,
    binary_strategy,
    contiguous_strategy,
    golomb_strategy,
    hamming_degeneracy,
    hamming_strategy,
    ternary_degeneracy,
    ternary_strategy,
)
from benign_fourier.generalization import (
    TargetSpec,
    bias_upper_bound,
    closed_form_error,
    hat_weights,
    noise_only_error,
    odd_multiple_schedule,
    power_dimension,
    random_bandlimited_target,
    signal_only_error,
    var_upper_bound,
)
from benign_fourier.interpolator import WeightProfile, evaluate, min_norm_fit
from benign_fourier.oracle import (
    McConfig,
    haar_weight_moments_by_counting,
    haar_weight_stats,
    monte_carlo_error,
    pinv_min_norm,
    pinv_model,
    statevector_expectation,
)
from benign_fourier.quantum import (
    InputState,
    benign_state,
    benign_state_weights,
    fit_quantum_model,
    fourier_weights_from_state,
    haar_mean_weight,
    haar_weight_variance,
    rebalanced_hamming_state,
)
from benign_fourier.spectra import FourierSeries, symmetric_spectrum, uniform_grid

N0 = 15
HAT_N = 31
SCALING_N = (31, 63, 127, 255)
SIGMA_SQ = 1.0


def hat_target():
    return random_bandlimited_target(N0, np.random.default_rng(0), power=1.0)


def sweep_dims():
    return odd_multiple_schedule(HAT_N, 15)


def check_1():
    worst = 0.0
    mc_ok = True
    notes = []
    for i, (n, m) in enumerate([(7, 0), (7, 4), (31, 4)]):
        w = WeightProfile.uniform(n * (m + 1))
        noise = closed_form_error(w, TargetSpec.zero(), n, SIGMA_SQ)
        tone = TargetSpec.tone(1, 0.6)
        signal = closed_form_error(w, tone, n, 0.0)
        expected_signal = 2 * signal_only_error(0.36, m)
        worst = max(worst, abs(noise.total - noise_only_error(n, m, SIGMA_SQ)), abs(signal.total - expected_signal))

        cfg = McConfig(trials=500, seed=1000 + i)
        est = monte_carlo_error(pinv_model(w), FourierSeries({}), math.sqrt(SIGMA_SQ), cfg, n)
        ok_n = abs(est.estimate - noise.total) <= 3 * est.stderr
        est_s = monte_carlo_error(pinv_model(w), tone.series, 0.0, cfg, n)
        ok_s = abs(est_s.estimate - signal.total) <= max(3 * est_s.stderr, 1e-12)
        mc_ok &= ok_n and ok_s
        notes.append(f"(n={n},m={m}) noise z={(est.estimate - noise.total) / est.stderr:+.2f}")
    return worst <= 1e-12 and mc_ok, f"max closed-form gap {worst:.1e}; " + ", ".join(notes)


def check_2():
    r = np.random.default_rng(2)
    worst_alpha = worst_interp = 0.0
    for _ in range(50):
        n = 2 * int(r.integers(0, 16)) + 1
        d = 2 * int(r.integers((n - 1) // 2, 78)) + 1
        w = WeightProfile(symmetric_spectrum(d).frequencies, r.uniform(0.01, 1.0, d))
        target = random_bandlimited_target(2 * int(r.integers(0, (n + 1) // 2)) + 1, r)
        y = target.series(uniform_grid(n)).real + r.normal(size=n)
        model = min_norm_fit(y, w)
        worst_alpha = max(worst_alpha, float(np.max(np.abs(model.alpha - pinv_min_norm(y, w)))))
        resid = np.max(np.abs(evaluate(model, uniform_grid(n)) - y)) / max(1.0, np.max(np.abs(y)))
        worst_interp = max(worst_interp, float(resid))
    return worst_alpha <= 1e-8 and worst_interp <= 1e-9, f"max |alpha - pinv| {worst_alpha:.1e}, max interp {worst_interp:.1e}"


def check_3():
    target = hat_target()
    ds = sweep_dims()
    reps = [closed_form_error(hat_weights(N0, d), target, HAT_N, SIGMA_SQ) for d in ds]
    var = np.array([r.var for r in reps])
    bias = np.array([r.bias_sq for r in reps])
    peak_ratio = ds[int(np.argmax(var))] / HAT_N
    monotone = bool(np.all(np.diff(bias[1:]) >= 0)) and bias[1] >= bias[0]
    ok = 1 <= peak_ratio <= 2 and monotone
    return ok, f"VAR peak at d/n={peak_ratio:g}, BIAS^2 nondecreasing for d>n: {monotone}"


def _slope(ns, values):
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def check_4():
    target = hat_target()
    quad = [closed_form_error(hat_weights(N0, power_dimension(n, 2.0)), target, n, SIGMA_SQ) for n in SCALING_N]
    slope = _slope(SCALING_N, [r.bias_sq for r in quad])
    totals = [r.total for r in quad]
    decreasing = all(a > b for a, b in zip(totals, totals[1:]))
    lin = [closed_form_error(hat_weights(N0, power_dimension(n, 1.0)), target, n, SIGMA_SQ).total for n in SCALING_N]
    floor = all(v >= SIGMA_SQ * (1 - 1e-12) for v in lin)
    ok = abs(slope + 2) <= 0.3 and decreasing and floor
    return ok, f"BIAS^2 slope {slope:.3f}, L decreasing: {decreasing}, alpha=1 min L {min(lin):.6f}"


def check_5():
    ok = True
    for n_q in range(1, 7):
        for strat, formula, size in (
            (hamming_strategy, hamming_degeneracy, 2 * n_q + 1),
            (binary_strategy, binary_degeneracy, 2 ** (n_q + 1) - 1),
            (ternary_strategy, ternary_degeneracy, 3**n_q),
        ):
            enc = strat(n_q)
            sizes = enc.degeneracy.sizes()
            ok &= len(enc.spectrum) == size
            ok &= all(v == formula(n_q, k) for k, v in sizes.items())
    g = golomb_strategy((0, 1, 4, 6)).degeneracy.sizes()
    ok &= len(g) == 13 and all(v == 1 for k, v in g.items() if k != 0)
    return ok, "Hamming/Binary/Ternary n_q<=6 and Golomb (0,1,4,6)"


def check_6():
    r = np.random.default_rng(6)
    enc = binary_strategy(4)
    n = 7
    worst_path = worst_interp = 0.0
    for _ in range(10):
        state = InputState.from_unnormalized(r.uniform(0.1, 1.0, 16))
        y = r.normal(size=n)
        model = fit_quantum_model(y, enc, state)
        x = r.random(100)
        sv = statevector_expectation(enc, state, model.observable, x).value
        classical = min_norm_fit(y, fourier_weights_from_state(enc, state))
        worst_path = max(worst_path, float(np.max(np.abs(sv - evaluate(classical, x)))))
        at_nodes = statevector_expectation(enc, state, model.observable, uniform_grid(n)).value
        worst_interp = max(worst_interp, float(np.max(np.abs(at_nodes - y))))
    return worst_path <= 1e-8 and worst_interp <= 1e-8, f"path gap {worst_path:.1e}, interp {worst_interp:.1e}"


def check_7():
    ok = True
    worst = 0.0
    for enc in (binary_strategy(3), golomb_strategy((0, 1, 4, 6))):
        stats = haar_weight_stats(enc, 10_000, seed=7)
        for k, s in stats.items():
            z_mean = (s.mean - haar_mean_weight(enc, k)) / s.mean_stderr
            if k != 0:
                ref = haar_weight_variance(enc, k, enc.dim)
            else:
                ref = haar_weight_moments_by_counting(enc, 0)[1]
            z_var = (s.variance - ref) / s.variance_stderr
            worst = max(worst, abs(z_mean), abs(z_var))
            ok &= abs(z_mean) <= 3 and abs(z_var) <= 3
    return ok, f"largest |z| over all k {worst:.2f}"


def check_8():
    r = np.random.default_rng(8)
    enc = hamming_strategy(4)
    worst = 0.0
    for _ in range(20):
        state = InputState.from_unnormalized(r.normal(size=16) + 1j * r.normal(size=16))
        before = fourier_weights_from_state(enc, state).weights
        after = fourier_weights_from_state(enc, rebalanced_hamming_state(state, 4)).weights
        worst = max(worst, float(np.max(np.abs(before - after))))
    return worst <= 1e-12, f"max weight change {worst:.1e}"


def _quantum_loss(n, d, state, target):
    return closed_form_error(fourier_weights_from_state(contiguous_strategy(d), state), target, n, SIGMA_SQ).total


def check_9(a=0.1):
    target = random_bandlimited_target(N0, np.random.default_rng(9), power=1.0)
    benign = _quantum_loss(31, 128, benign_state(N0, 128, a), target)
    uniform = _quantum_loss(31, 128, InputState.uniform(128), target)
    losses = [_quantum_loss(n, 8 * n, benign_state(N0, 8 * n, a), target) for n in (31, 63, 127)]
    decreasing = all(x > y for x, y in zip(losses, losses[1:]))
    worst = 0.0
    for n0, d in ((3, 8), (7, 32), (15, 128), (15, 248), (15, 504), (15, 1016)):
        aa = min(a, 2 / (n0 + 1))
        direct = fourier_weights_from_state(contiguous_strategy(d), benign_state(n0, d, aa)).weights
        worst = max(worst, float(np.max(np.abs(direct - benign_state_weights(n0, d, aa).weights))))
    ok = benign < uniform and decreasing and worst <= 1e-12
    trend = ", ".join(f"{v:.4f}" for v in losses)
    return ok, f"L benign {benign:.4f} < uniform {uniform:.4f}; d=8n trend {trend}; branch gap {worst:.1e}"


def check_10():
    target = hat_target()
    configs = [(HAT_N, d) for d in sweep_dims()]
    configs += [(n, power_dimension(n, a)) for n in SCALING_N for a in (1.0, 2.0)]
    ok = True
    slack = []
    for n, d in configs:
        w = hat_weights(N0, d)
        rep = closed_form_error(w, target, n, SIGMA_SQ)
        vb = var_upper_bound(w, N0, n, SIGMA_SQ)
        bb = bias_upper_bound(w, target, n, d, n0=N0)
        ok &= vb >= rep.var * (1 - 1e-12) and bb.value >= rep.bias_sq and bb.strict >= rep.bias_sq
        slack.append(min(vb - rep.var, bb.value - rep.bias_sq, bb.strict - rep.bias_sq))
    return ok, f"{len(configs)} configurations, smallest margin {min(slack):.2e}"


CRITERIA = [
    (1, check_1, 10),
    (2, check_2, 30),
    (3, check_3, 5),
    (4, check_4, 10),
    (5, check_5, 5),
    (6, check_6, 10),
    (7, check_7, 60),
    (8, check_8, 5),
    (9, check_9, 60),
    (10, check_10, 5),
]


def run_criterion(number, fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = bool(ok) and elapsed < budget
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} - {detail} [{elapsed:.2f}s of {budget}s]"
    return passed, line


@pytest.mark.parametrize("number, fn, budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, fn, budget, capsys):
    passed, line = run_criterion(number, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
