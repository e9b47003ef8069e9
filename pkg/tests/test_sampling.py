"""
Tests for seeded random admissible data
"""
import numpy as np

from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.sampling import (
    anticommuting_part,
    check_rng,
    parity_part,
    random_clifford_potential,
    random_end_gamma,
    random_endo,
    random_field,
    random_masses,
)
from tests.conftest import CAPACITY


def test_check_rng_is_deterministic_per_check():
    a = check_rng(7, "clifford.chirality").standard_normal(5)
    b = check_rng(7, "clifford.chirality").standard_normal(5)
    c = check_rng(7, "operators.bochner").standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)


def test_random_field_respects_band(rng):
    field = random_field(rng, 2, 1, (3,), CAPACITY)
    assert field.degree <= 1
    assert field.value_shape == (3,)


def test_real_field_is_real_pointwise(rng):
    field = random_field(rng, 2, 1, (), CAPACITY, real=True)
    assert np.allclose(field.sample(4).imag, 0.0)


def test_end_gamma_commutes_with_gamma(module2, rng):
    X = random_end_gamma(rng, module2, 1, CAPACITY)
    for g in module2.gammas:
        assert cf.commutator(g, X).max_abs() < 1e-12


def test_parity_part_is_even(module2, rng):
    B = random_endo(rng, module2, 0, CAPACITY)
    even = parity_part(module2, B, +1)
    assert (module2.tau @ even @ module2.tau - even).max_abs() < 1e-12


def test_clifford_potential_is_anti_hermitian(module2, rng):
    potential = random_clifford_potential(rng, module2, 1, CAPACITY)
    for component in potential.as_list():
        assert (component + component.adjoint()).max_abs() < 1e-12
        for g in module2.gammas:
            assert cf.commutator(g, component).max_abs() < 1e-12


def test_anticommuting_part_anticommutes(module2, rng):
    B = random_endo(rng, module2, 1, CAPACITY)
    Z = anticommuting_part(module2, B)
    for g in module2.gammas:
        assert cf.anticommutator(g, Z).max_abs() < 1e-12


def test_random_masses_are_real_symmetric(rng):
    m_dirac, m_majorana = random_masses(rng, 3)
    for m in (m_dirac, m_majorana):
        assert np.isrealobj(m)
        assert np.allclose(m, m.T)
