"""
Tests for band-limited fields and forms on the torus
"""
import numpy as np
import pytest

from dirac_verify.core.fourier_fields import (
    CapacityExceeded,
    FormField,
    FourierField,
    ev_g,
    exterior_derivative,
    l2_pairing,
    laplacian,
    product,
    trace_pairing,
    wedge,
)
from dirac_verify.core.sampling import random_field
from dirac_verify.models import Signature


def test_plane_wave_derivative_is_exact():
    wave = FourierField.plane_wave((2, -1), 3.0, capacity=4)
    assert np.allclose(wave.derive(0).mode((2, -1)), 6j)
    assert np.allclose(wave.derive(1).mode((2, -1)), -3j)


def test_product_of_conjugate_waves_is_constant():
    a = FourierField.plane_wave((1, 0), 1.0, capacity=4)
    b = FourierField.plane_wave((-1, 0), 1.0, capacity=4)
    c = a * b
    assert c.zero_mode() == pytest.approx(1.0)
    assert c.is_constant(atol=1e-14)


def test_product_matches_grid_values(rng):
    f = random_field(rng, 2, 1, (), 6)
    g = random_field(rng, 2, 1, (), 6)
    fg = product(f, g)
    assert np.allclose(fg.sample(8), f.sample(8) * g.sample(8))


def test_matrix_product_composes_fibers(rng):
    A = random_field(rng, 2, 1, (3, 3), 6)
    psi = random_field(rng, 2, 1, (3,), 6)
    values = (A @ psi).sample(8)
    expected = np.einsum("...ij,...j->...i", A.sample(8), psi.sample(8))
    assert np.allclose(values, expected)


def test_product_beyond_capacity_is_refused(rng):
    f = random_field(rng, 2, 2, (), 3)
    g = random_field(rng, 2, 2, (), 3)
    with pytest.raises(CapacityExceeded, match="capacity 3"):
        f * g


def test_field_above_capacity_cannot_be_built():
    with pytest.raises(CapacityExceeded):
        FourierField.plane_wave((3, 0), 1.0, capacity=2)


def test_integral_and_norm():
    one = FourierField.constant(1.0, 2)
    assert one.integrate() == pytest.approx((2 * np.pi) ** 2)
    wave = FourierField.plane_wave((1, 1), 2.0)
    assert wave.integrate() == pytest.approx(0.0)
    assert wave.l2_norm() == pytest.approx(2.0 * 2 * np.pi)


def test_conjugate_reflects_modes():
    wave = FourierField.plane_wave((1, 0), 1j)
    conj = wave.conjugate()
    assert np.allclose(conj.mode((-1, 0)), -1j)
    assert np.allclose(conj.mode((1, 0)), 0)


def test_pairings_match_products(rng):
    f = random_field(rng, 2, 1, (2, 2), 6)
    g = random_field(rng, 2, 1, (2, 2), 6)
    assert trace_pairing(f, g) == pytest.approx((f @ g).trace().integrate())
    psi = random_field(rng, 2, 1, (2,), 6)
    assert l2_pairing(psi, psi).real == pytest.approx(psi.l2_norm() ** 2)


def test_kron_conventions(rng):
    B = rng.standard_normal((2, 2))
    M = rng.standard_normal((3, 3))
    field = FourierField.constant(B, 2)
    assert np.allclose(field.kron(M).zero_mode(), np.kron(B, M))
    assert np.allclose(field.kron_left(M).zero_mode(), np.kron(M, B))


def test_block_assembly_with_zero_blocks():
    a = FourierField.plane_wave((1, 0), np.eye(2))
    b = FourierField.constant(np.ones((1, 1)), 2)
    block = FourierField.block([[a, None], [None, b]], 2, 6, (2, 1))
    assert block.value_shape == (3, 3)
    assert np.allclose(block.mode((1, 0))[:2, :2], np.eye(2))
    assert np.allclose(block.zero_mode()[2, 2], 1.0)
    assert np.allclose(block.zero_mode()[:2, 2], 0.0)


def test_from_modes_rejects_wrong_length():
    with pytest.raises(ValueError, match="components"):
        FourierField.from_modes({(1, 0, 0): 1.0}, 2)


def test_sample_refuses_aliasing():
    wave = FourierField.plane_wave((2, 0), 1.0)
    with pytest.raises(ValueError, match="aliases"):
        wave.sample(4)


def test_d_squared_vanishes(rng):
    f = random_field(rng, 3, 1, (), 6)
    one = exterior_derivative(FormField.scalar(f))
    assert exterior_derivative(one).max_abs() < 1e-12


def test_wedge_of_scalar_one_form_with_itself_vanishes(rng):
    a = FormField.from_list([random_field(rng, 2, 1, (), 6) for _ in range(2)])
    assert wedge(a, a).max_abs() < 1e-12


def test_form_component_antisymmetry(rng):
    a = FormField.from_list([random_field(rng, 2, 1, (), 6) for _ in range(2)])
    b = FormField.from_list([random_field(rng, 2, 1, (), 6) for _ in range(2)])
    F = wedge(a, b)
    assert np.allclose(F.component(1, 0).coefficients, -F.component(0, 1).coefficients)
    assert F.component(0, 0).max_abs() == 0.0


def test_ev_g_contracts_one_forms_only(rng):
    sig = Signature(p=1, q=1)
    a = FormField.from_list([FourierField.constant(2.0, 2), FourierField.constant(3.0, 2)])
    assert ev_g(sig, a).zero_mode() == pytest.approx(4.0 - 9.0)
    with pytest.raises(ValueError, match="one-forms"):
        ev_g(sig, wedge(a, a))


def test_laplacian_of_plane_wave():
    sig = Signature(p=1, q=1)
    wave = FourierField.plane_wave((2, 1), 1.0)
    # sum_j eta_j (i k_j)^2 = -(4 - 1)
    assert np.allclose(laplacian(sig, wave).mode((2, 1)), -3.0)


def test_fields_keep_a_degree_per_axis(rng):
    f = random_field(rng, 3, 1, (2, 2), 6, axes=1)
    g = FourierField.plane_wave((0, 2, 0), np.eye(2), capacity=6)
    assert f.degrees == (1, 0, 0)
    assert g.degrees == (0, 2, 0)
    fg = f @ g
    assert fg.degrees == (1, 2, 0)
    assert fg.degree == 2
    assert np.allclose(fg.sample(5), f.sample(5) @ g.sample(5))
    assert (f + g).degrees == (1, 2, 0)
    assert np.allclose(fg.derive(2).coefficients, 0.0)


def test_trace_pairing_on_mixed_supports(rng):
    f = random_field(rng, 2, 1, (2, 2), 6, axes=1)
    g = random_field(rng, 2, 1, (2, 2), 6)
    assert trace_pairing(f, g) == pytest.approx((f @ g).trace().integrate())


def test_adding_a_number_to_a_matrix_field_adds_the_identity(rng):
    A = random_field(rng, 2, 1, (3, 3), 6)
    shifted = A + 2.0
    assert np.allclose(shifted.zero_mode(), A.zero_mode() + 2.0 * np.eye(3))
    assert np.allclose(shifted.mode((1, 1)), A.mode((1, 1)))
    assert np.allclose((1.0 - A).zero_mode(), np.eye(3) - A.zero_mode())
    constant = FourierField.constant(np.ones((2, 2)), 2)
    assert np.allclose((constant + 1.0).zero_mode(), [[2.0, 1.0], [1.0, 2.0]])


def test_adding_a_number_to_a_section_is_refused(rng):
    psi = random_field(rng, 2, 1, (3,), 6)
    with pytest.raises(ValueError, match="cannot add a number"):
        psi + 1.0
