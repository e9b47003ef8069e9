"""
Tests for the Pauli and pi lifts of real operators
"""
import numpy as np
import pytest

from dirac_verify.core.dirac_ops import is_simple_type, majorana_op, real_form_operator
from dirac_verify.core.graded_modules import TwistData, build_real_form_module, build_twisted_module
from dirac_verify.core.pauli_maps import (
    curvature_coefficient,
    fermionic_equivalence,
    pauli_map,
    pauli_witness,
    pi_map,
)
from dirac_verify.core.sampling import random_operator, random_section
from dirac_verify.models import Signature
from tests.conftest import CAPACITY


def _real_random_operator(module, rng):
    D = random_operator(rng, module, 1, CAPACITY)
    E = build_real_form_module(module)
    return real_form_operator(module, D, E), E


def test_curvature_coefficient():
    assert curvature_coefficient(2) == pytest.approx(0.5)
    assert curvature_coefficient(4) == pytest.approx(0.75)


def test_pauli_map_needs_real_operator(module2, rng):
    D = random_operator(rng, module2, 1, CAPACITY)
    with pytest.raises(ValueError, match="not real"):
        pauli_map(D)


def test_pauli_map_doubles_the_module(module2, rng):
    D, E = _real_random_operator(module2, rng)
    pauli = pauli_map(D)
    assert pauli.op.module.dim == 2 * E.dim
    assert pauli.curvature_endo.value_shape == (E.dim, E.dim)


def test_fermionic_pairing_is_preserved(module2, rng):
    D, E = _real_random_operator(module2, rng)
    psi = random_section(rng, E, 1, CAPACITY)
    result = fermionic_equivalence(D, psi)
    assert result.residual < 1e-9
    assert result.pointwise_residual < 1e-9


def test_pi_map_rejects_operator_outside_simple_type(module2, rng):
    D, _ = _real_random_operator(module2, rng)
    assert not is_simple_type(D)
    with pytest.raises(ValueError, match="simple type"):
        pi_map(D)


def test_pi_map_of_constant_majorana_operator(majorana2):
    mass = 1.3
    maj = majorana_op(majorana2, mass * np.eye(majorana2.dim), capacity=CAPACITY)
    pi = pi_map(maj.op)
    # only the Z^2 term survives for constant data
    expected = curvature_coefficient(2) * mass ** 2
    assert pi.curvature_endo.max_abs() == pytest.approx(expected)
    assert pi.op.module.dim == 2 * maj.op.module.dim


def test_pauli_witness_leaves_kernel(majorana2):
    witness = pauli_witness(majorana2, mass=1.0, capacity=CAPACITY)
    assert witness is not None
    assert witness.kernel_residual < 1e-10
    assert witness.curvature_norm > 1e-3


def test_pauli_witness_without_on_shell_direction():
    sig = Signature(p=2, q=0, epsilon=-1)
    module = build_twisted_module(sig, TwistData(w=1))
    assert pauli_witness(module) is None
