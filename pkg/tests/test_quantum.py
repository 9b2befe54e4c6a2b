import numpy as np
import pytest

from benign_fourier.encodings import (
    binary_strategy,
    contiguous_strategy,
    golomb_strategy,
    hamming_strategy,
    ternary_strategy,
)
from benign_fourier.errors import InvalidArgumentError, NonInterpolableError, UnsupportedError
from benign_fourier.generalization import TargetSpec, closed_form_error, random_bandlimited_target
from benign_fourier.interpolator import min_norm_fit
from benign_fourier.oracle import (
    McConfig,
    haar_weight_moments_by_counting,
    monte_carlo_error,
    statevector_expectation,
)
from benign_fourier.quantum import (
    InputState,
    Observable,
    benign_state,
    benign_state_weights,
    fit_quantum_model,
    fourier_weights_from_state,
    haar_mean_weight,
    haar_weight_variance,
    optimal_observable,
    rebalanced_hamming_state,
    simplified_model_fit,
)
from benign_fourier.spectra import uniform_grid


def random_state(r, d, phases=True):
    mod = r.uniform(0.2, 1.0, d)
    ph = np.exp(1j * r.uniform(0, 2 * np.pi, d)) if phases else 1.0
    return InputState.from_unnormalized(mod * ph)


def test_zero_data_zero_observable(rng):
    enc = binary_strategy(3)
    M = optimal_observable(np.zeros(5), enc, random_state(rng, 8))
    assert np.all(M.matrix == 0)


def test_uniform_state_reduces_to_simplified_model(rng):
    for enc in (binary_strategy(3), hamming_strategy(3), golomb_strategy((0, 1, 4, 6))):
        y = rng.normal(size=3)
        full = optimal_observable(y, enc, InputState.uniform(enc.dim))
        simple = simplified_model_fit(y, enc)
        np.testing.assert_allclose(full.matrix, simple.observable.matrix, atol=1e-12)


def test_binary_interpolation_via_statevector(rng):
    enc = binary_strategy(3)
    y = rng.normal(size=3)
    state = random_state(rng, 8)
    model = fit_quantum_model(y, enc, state)
    got = statevector_expectation(enc, state, model.observable, uniform_grid(3))
    np.testing.assert_allclose(got.value, y, atol=1e-8)
    assert got.imag_residue < 1e-10


def test_weight_examples():
    enc = binary_strategy(3)
    w = fourier_weights_from_state(enc, InputState.uniform(8))
    for k in range(-7, 8):
        assert w[k] == pytest.approx((8 - abs(k)) / 64)
    w = fourier_weights_from_state(enc, InputState.basis(8, 0))
    assert w[0] == 1.0 and w.total() == 1.0
    w = fourier_weights_from_state(contiguous_strategy(8), benign_state(3, 8, 0.25))
    assert w[0] == pytest.approx(1 / 6)
    assert w[1] == pytest.approx(19 / 144)


def test_spiky_and_smooth_profiles():
    golomb = fourier_weights_from_state(golomb_strategy((0, 1, 4, 9, 11)), InputState.uniform(5))
    nonzero = golomb.weights[golomb.frequencies != 0]
    assert np.allclose(nonzero, nonzero[0])
    ham = fourier_weights_from_state(hamming_strategy(4), InputState.uniform(16))
    pos = [ham[k] for k in range(0, 5)]
    assert all(a > b for a, b in zip(pos, pos[1:]))


def test_d_equals_n_gives_trig_interpolant(rng):
    enc = contiguous_strategy(3)  # spectrum {-2..2}, n = 5
    y = rng.normal(size=5)
    model = simplified_model_fit(y, enc)
    np.testing.assert_allclose(model(uniform_grid(5)).real, y, atol=1e-12)


@pytest.mark.parametrize("enc", [binary_strategy(4), hamming_strategy(4), ternary_strategy(2), golomb_strategy((0, 1, 4, 6))])
def test_hermitian_normalized_symmetric(rng, enc):
    state = random_state(rng, enc.dim)
    M = optimal_observable(rng.normal(size=3), enc, state)
    assert np.max(np.abs(M.matrix - M.matrix.conj().T)) < 1e-12
    w = fourier_weights_from_state(enc, state)
    assert w.total() == pytest.approx(1.0, abs=1e-12)
    assert w.is_symmetric(atol=1e-15)


def test_two_evaluation_paths_agree(rng):
    enc = binary_strategy(4)
    state = random_state(rng, 16)
    y = rng.normal(size=7)
    model = fit_quantum_model(y, enc, state)
    x = rng.random(100)
    sv = statevector_expectation(enc, state, model.observable, x)
    np.testing.assert_allclose(model(x).real, sv.value, atol=1e-8)
    # same function as the classical fit with the induced weights
    classical = min_norm_fit(y, model.weights)
    np.testing.assert_allclose(classical(x), model(x), atol=1e-10)


def test_phase_invariance(rng):
    enc = ternary_strategy(2)
    state = random_state(rng, 4, phases=False)
    rotated = InputState(state.amplitudes * np.exp(1j * rng.uniform(0, 6, 4)))
    a = fourier_weights_from_state(enc, state).weights
    b = fourier_weights_from_state(enc, rotated).weights
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_frobenius_minimality(rng):
    enc = binary_strategy(3)
    state = random_state(rng, 8)
    y = rng.normal(size=5)
    M = optimal_observable(y, enc, state).matrix
    d = 8
    # linear map from Hermitian M (real parametrisation) to the sampled model values
    basis = []
    for i in range(d):
        for j in range(i, d):
            E = np.zeros((d, d), complex)
            E[i, j] = E[j, i] = 1
            basis.append(E)
            if i != j:
                E = np.zeros((d, d), complex)
                E[i, j], E[j, i] = 1j, -1j
                basis.append(E)
    A = np.array([statevector_expectation(enc, state, Observable(E), uniform_grid(5)).value for E in basis]).T
    _, s, vt = np.linalg.svd(A)
    null = vt[np.sum(s > 1e-10):]
    base = np.linalg.norm(M)
    for _ in range(10):
        coeffs = rng.normal(size=len(null)) @ null
        H = sum(c * E for c, E in zip(coeffs, basis)) * 0.05
        pert = M + H
        got = statevector_expectation(enc, state, Observable(pert), uniform_grid(5)).value
        np.testing.assert_allclose(got, y, atol=1e-9)
        assert np.linalg.norm(pert) > base


def test_quantum_matches_monte_carlo():
    r = np.random.default_rng(11)
    enc = binary_strategy(3)
    state = random_state(r, 8)
    n, sigma = 5, 0.7
    target = random_bandlimited_target(3, r, power=0.5)
    rep = closed_form_error(fourier_weights_from_state(enc, state), target, n, sigma**2)

    def factory(y):
        obs = optimal_observable(y, enc, state)
        return lambda x: statevector_expectation(enc, state, obs, x).value

    est = monte_carlo_error(factory, target.series, sigma, McConfig(trials=400, seed=2), n)
    assert abs(est.estimate - rep.total) <= 3 * est.stderr


def test_preconditions(rng):
    enc = binary_strategy(2)
    amp = np.array([1, 0, 1, 1]) / np.sqrt(3)
    with pytest.raises(InvalidArgumentError):
        optimal_observable(rng.normal(size=3), enc, InputState(amp))
    with pytest.raises(InvalidArgumentError):
        optimal_observable(rng.normal(size=3) + 1j, enc, InputState.uniform(4))
    with pytest.raises(InvalidArgumentError):
        InputState([1.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        Observable([[0, 1], [0, 0]])


def test_golomb_gap_is_non_interpolable():
    # spectrum of (0, 2) is {-2, 0, 2}; residues +-1 mod 5 have no aliases
    from benign_fourier.encodings import EncodingStrategy

    enc = EncodingStrategy([0.0, 2.0])
    y = np.cos(2 * np.pi * uniform_grid(5))
    with pytest.raises(NonInterpolableError):
        optimal_observable(y, enc, InputState.uniform(2))


def test_haar_mean_sums_to_one():
    for enc in (binary_strategy(3), golomb_strategy((0, 1, 4, 6)), hamming_strategy(3)):
        total = sum(haar_mean_weight(enc, k) for k in enc.spectrum)
        assert total == pytest.approx(1.0)


def test_haar_variance_closed_forms_match_counting():
    for enc in (binary_strategy(3), contiguous_strategy(6), golomb_strategy((0, 1, 4, 9, 11))):
        for k in enc.spectrum:
            if k == 0:
                continue
            mean, var = haar_weight_moments_by_counting(enc, k)
            assert mean == pytest.approx(haar_mean_weight(enc, k), rel=1e-12)
            assert var == pytest.approx(haar_weight_variance(enc, k, enc.dim), rel=1e-12)


def test_golomb_variance_formula():
    d = 4
    D = 7 * 6 * 5 * 4
    assert haar_weight_variance("golomb", 3, d) == pytest.approx((3 * 16 - 4 - 6) / (D * 20))


def test_haar_variance_unsupported():
    with pytest.raises(UnsupportedError):
        haar_weight_variance("hamming", 1, 8)
    with pytest.raises(UnsupportedError):
        haar_weight_variance("binary", 0, 8)


def test_rebalancing(rng):
    u = InputState.uniform(8)
    np.testing.assert_allclose(rebalanced_hamming_state(u, 3).amplitudes, u.amplitudes)
    state = random_state(rng, 8, phases=False)
    once = rebalanced_hamming_state(state, 3)
    np.testing.assert_allclose(rebalanced_hamming_state(once, 3).amplitudes, once.amplitudes, atol=1e-15)
    enc = hamming_strategy(3)
    a = fourier_weights_from_state(enc, state).weights
    b = fourier_weights_from_state(enc, once).weights
    np.testing.assert_allclose(a, b, atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        rebalanced_hamming_state(InputState.uniform(6), 3)


def test_benign_state_example():
    s = benign_state(3, 8, 0.25)
    np.testing.assert_allclose(s.probabilities, [1 / 12] * 3 + [0.25] * 2 + [1 / 12] * 3)
    w = benign_state_weights(3, 8, 0.25)
    assert w[0] == pytest.approx(1 / 6)
    assert w[1] == pytest.approx(19 / 144)
    assert w[7] == pytest.approx(1 / 144)


@pytest.mark.parametrize("n0, d, a", [(3, 8, 0.25), (7, 32, 0.2), (15, 128, 0.1), (15, 128, 0.125), (3, 8, 0.0)])
def test_benign_closed_form_matches_convolution(n0, d, a):
    direct = fourier_weights_from_state(contiguous_strategy(d), benign_state(n0, d, a))
    closed = benign_state_weights(n0, d, a)
    np.testing.assert_array_equal(direct.frequencies, closed.frequencies)
    assert np.max(np.abs(direct.weights - closed.weights)) < 1e-12
    b = (1 - (n0 + 1) / 2 * a) / (d - (n0 + 1) / 2)
    if a >= b:
        # only a heavier central block makes the profile decay away from k = 0
        pos = closed.weights[d - 1 :]
        assert np.all(np.diff(pos) <= 1e-15)


def test_benign_boundary_a():
    s = benign_state(3, 8, 0.5)
    assert np.count_nonzero(s.probabilities) == 2
    w = benign_state_weights(3, 8, 0.5)
    assert set(np.flatnonzero(w.weights > 0) - 7) == {-1, 0, 1}


@pytest.mark.parametrize("args", [(3, 9, 0.1), (5, 8, 0.1), (3, 8, 0.6), (15, 16, 0.01)])
def test_benign_rejects(args):
    with pytest.raises(InvalidArgumentError):
        benign_state_weights(*args)


def test_json_round_trip(rng):
    s = random_state(rng, 4)
    assert np.array_equal(InputState.from_json(s.to_json()).amplitudes, s.amplitudes)
    M = optimal_observable(rng.normal(size=3), binary_strategy(2), s)
    assert np.array_equal(Observable.from_json(M.to_json()).matrix, M.matrix)
