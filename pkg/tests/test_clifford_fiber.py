"""
Tests for the pointwise Clifford algebra on the Grassmann fiber
"""
import numpy as np
import pytest

from dirac_verify.core import clifford_fiber as cf
from dirac_verify.models import Signature

SIGNATURES = [
    Signature(p=2, q=0, epsilon=1),
    Signature(p=1, q=1, epsilon=-1),
    Signature(p=3, q=1, epsilon=1),
    Signature(p=0, q=4, epsilon=-1),
]


def test_blades_are_ordered_by_grade():
    assert cf.blades(2) == ((), (0,), (1,), (0, 1))
    assert len(cf.blades(4)) == 16
    assert cf.blade_index(3)[(0, 2)] == 5


def test_permutation_sign():
    assert cf.permutation_sign([0, 1, 2]) == 1
    assert cf.permutation_sign([1, 0]) == -1
    assert cf.permutation_sign([2, 0, 1]) == 1


def test_multivector_blade_needs_increasing_indices():
    with pytest.raises(ValueError, match="strictly increasing"):
        cf.Multivector.blade((1, 0))


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: s.label)
def test_clifford_relation(sig):
    gammas = cf.gamma_matrices(sig)
    eye = np.eye(2 ** sig.n)
    for a in range(sig.n):
        for b in range(sig.n):
            expected = 2 * sig.epsilon * sig.eta[a] * (a == b) * eye
            assert np.allclose(cf.anticommutator(gammas[a], gammas[b]), expected, atol=1e-14)


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: s.label)
def test_symbol_inverts_quantization(sig, rng):
    vector = rng.standard_normal(2 ** sig.n) + 1j * rng.standard_normal(2 ** sig.n)
    omega = cf.Multivector.from_vector(sig.n, vector)
    assert cf.symbol_map(sig, cf.quantize(sig, omega)).is_close(omega, sig.n)


def test_quantized_bivector_squares_to_minus_metric_product():
    for sig in (Signature(p=2, q=0), Signature(p=1, q=1), Signature(p=2, q=0, epsilon=-1)):
        e12 = cf.quantize(sig, cf.Multivector.blade((0, 1)))
        expected = -sig.eta[0] * sig.eta[1] * np.eye(4)
        assert np.allclose(e12 @ e12, expected)


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: s.label)
def test_chirality_is_odd_involution(sig):
    tau = cf.chirality(sig)
    assert np.allclose(tau @ tau, np.eye(2 ** sig.n))
    for g in cf.gamma_matrices(sig):
        assert np.allclose(cf.anticommutator(tau, g), 0)


def test_chirality_prefactor_branch():
    assert cf.chirality_prefactor(Signature(p=2, q=0)) == 1j
    assert cf.chirality_prefactor(Signature(p=1, q=1)) == 1.0


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: s.label)
def test_theta_is_right_inverse_of_quantization(sig, rng):
    gammas = cf.gamma_matrices(sig)
    d = 2 ** sig.n
    phi = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    assert np.allclose(cf.quantize_form(gammas, cf.theta_components(sig, gammas)), np.eye(d))
    assert np.allclose(cf.quantize_form(gammas, cf.ext_theta(sig, gammas, phi)), phi)


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: s.label)
def test_opposite_action_commutes_and_is_clifford(sig):
    gammas = cf.gamma_matrices(sig)
    ops = cf.opposite_gammas(sig)
    eye = np.eye(2 ** sig.n)
    for a in range(sig.n):
        for b in range(sig.n):
            assert np.allclose(cf.commutator(gammas[a], ops[b]), 0)
            expected = 2 * sig.epsilon * sig.eta[a] * (a == b) * eye
            assert np.allclose(cf.anticommutator(ops[a], ops[b]), expected)


def test_opposite_action_is_right_multiplication(rng):
    sig = Signature(p=3, q=1)
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    alpha = rng.standard_normal(4)
    element = cf.quantize(sig, cf.Multivector.from_vector(4, x))
    expected = cf.symbol_map(sig, element @ cf.gamma_of(sig, alpha)).to_vector(4)
    assert np.allclose(cf.opposite_action(sig, alpha) @ x, expected)


def test_quantized_trace_picks_scalar_part(sig2, rng):
    gammas = cf.gamma_matrices(sig2)
    values = rng.standard_normal(4)
    components = {b: values[i] * np.eye(4) for i, b in enumerate(cf.blades(2))}
    assert cf.quantized_trace(gammas, components) == pytest.approx(4 * values[0])


def test_gamma_of_checks_covector_length(sig2):
    with pytest.raises(ValueError, match="2 components"):
        cf.gamma_of(sig2, [1.0, 0.0, 0.0])


def test_symbol_map_checks_shape(sig2):
    with pytest.raises(ValueError, match="4x4"):
        cf.symbol_map(sig2, np.eye(3))


def test_gamma_apply_on_vacuum_is_wedge(sig2):
    one = cf.Multivector.blade(())
    result = cf.gamma_apply(sig2, [0.0, 2.0], one)
    assert result.is_close(cf.Multivector.blade((1,), 2.0), 2)
