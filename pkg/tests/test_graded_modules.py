"""
Tests for graded Clifford module constructions
"""
import numpy as np
import pytest

from dirac_verify.core.fourier_fields import FourierField
from dirac_verify.core.graded_modules import (
    MassBlockSpec,
    TwistData,
    build_dirac_module,
    build_real_form_module,
    build_stm_module,
    build_twisted_module,
    charged_yukawa_endo,
    diagonal_embed,
    double,
    pauli_membership,
    yukawa_mapping,
)
from dirac_verify.models import RealBranch, Signature, TwistDims


def test_twisted_module_flags(module2):
    assert module2.dim == 8
    assert module2.flags.s_tau_gamma == -1
    assert module2.flags.s_J_gamma == -1
    assert module2.flags.j_squared == 1
    assert module2.op_gammas is not None


def test_plus_branch_keeps_gamma_real(sig2):
    module = build_twisted_module(sig2, TwistData(w=1), RealBranch.PLUS)
    assert module.flags.s_J_gamma == 1


@pytest.mark.parametrize("p,q", [(2, 0), (1, 1), (3, 1), (4, 0)])
def test_majorana_property_matches_signature(p, q):
    sig = Signature(p=p, q=q)
    module = build_twisted_module(sig, TwistData(w=1), RealBranch.MINUS)
    assert module.is_majorana is sig.admits_majorana


def test_twist_dimension_must_be_positive(sig2):
    with pytest.raises(ValueError, match=">= 1"):
        build_twisted_module(sig2, TwistData(w=0))


def test_dirac_module_needs_majorana_input():
    sig = Signature(p=1, q=1)
    module = build_twisted_module(sig, TwistData(w=1), RealBranch.MINUS)
    with pytest.raises(ValueError, match="Majorana"):
        build_dirac_module(module)


def test_dirac_module_over_majorana(majorana2):
    S = build_dirac_module(majorana2)
    assert S.dim == 2 * majorana2.dim
    assert S.multiplicity == 2
    # tau_S = tau2 (x) id: first block even
    assert np.allclose(S.tau[: majorana2.dim, : majorana2.dim], np.eye(majorana2.dim))
    assert S.flags.s_tau_gamma == -1


def test_real_form_module_makes_gamma_real(module2):
    E = build_real_form_module(module2)
    assert E.dim == 2 * module2.dim
    assert E.flags.s_J_gamma == 1
    for g in E.gammas:
        assert np.allclose(E.conjugate_endo(g), g)


def test_doubling(module2):
    E = build_real_form_module(module2)
    P = double(E)
    assert P.dim == 2 * E.dim
    assert P.multiplicity == 2 * E.multiplicity
    assert np.allclose(P.tau[: E.dim, : E.dim], E.tau)
    assert np.allclose(P.tau[E.dim:, E.dim:], -E.tau)


def test_conjugation_is_antilinear(module2, rng):
    psi = rng.standard_normal(module2.dim) + 1j * rng.standard_normal(module2.dim)
    assert np.allclose(module2.conjugate_section(1j * psi), -1j * module2.conjugate_section(psi))
    twice = module2.conjugate_section(module2.conjugate_section(psi))
    assert np.allclose(twice, module2.flags.j_squared * psi)


def test_conjugation_of_fields_matches_matrices(module2, rng):
    B = rng.standard_normal((module2.dim, module2.dim)) + 1j * rng.standard_normal((module2.dim, module2.dim))
    field = FourierField.constant(B, 2)
    assert np.allclose(module2.conjugate_endo(field).zero_mode(), module2.conjugate_endo(B))


def test_pauli_membership_of_diagonal_sections(rng):
    z = rng.standard_normal(4)
    assert pauli_membership(diagonal_embed(z))
    assert not pauli_membership(np.concatenate([z, z + 1.0]))
    field = FourierField.plane_wave((1, 0), z)
    assert pauli_membership(diagonal_embed(field))


def test_describe_is_json_ready(module2):
    description = module2.describe()
    assert description["dim"] == 8
    assert description["signature"] == {"p": 2, "q": 0, "epsilon": 1}
    assert description["flags"]["s_tau_gamma"] == -1
    assert len(description["tau"]) == 8


def test_stm_module_blocks_and_projectors():
    sig = Signature(p=2, q=0)
    stm = build_stm_module(sig, TwistDims(v_r=1, v_l=0, e_r=1, e_l=1))
    d = stm.W.dim
    assert d == 4 * 3
    assert stm.S.dim == 2 * d
    assert stm.E.dim == 4 * d
    assert np.allclose(stm.W.blocks["nu"] + stm.W.blocks["e"], np.eye(d))
    total = np.zeros((d, d), dtype=complex)
    for chirality in (1, -1):
        for inner in (1, -1):
            for block in ("nu", "e"):
                p = stm.projector(chirality, inner, block)
                assert np.allclose(p @ p, p)
                total = total + p
    assert np.allclose(total, np.eye(d))


def test_stm_module_needs_majorana_signature():
    with pytest.raises(ValueError, match="no Majorana"):
        build_stm_module(Signature(p=4, q=0), TwistDims())


def test_yukawa_mapping_shape_and_validation(rng):
    N = 2
    g = [rng.standard_normal((N, N)) for _ in range(3)]
    higgs = np.array([0.3, 1.1])
    phi_lr = yukawa_mapping(g[0], g[1], g[2], higgs)
    assert phi_lr.shape == (4 * N, 3 * N)
    assert np.allclose(phi_lr[2 * N:, 2 * N:], np.kron(g[2], higgs.reshape(2, 1)))
    with pytest.raises(ValueError, match="g_q"):
        yukawa_mapping(g[0], np.eye(3), g[2], higgs)


def test_charged_yukawa_endo_is_hermitian_and_odd(rng):
    dims = TwistDims(v_r=1, v_l=0, e_r=3, e_l=4)
    phi_lr = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    phi_e = charged_yukawa_endo(dims, phi_lr)
    grading = np.diag([1.0] * 3 + [-1.0] * 4)
    assert np.allclose(phi_e, phi_e.conj().T)
    assert np.allclose(grading @ phi_e @ grading, -phi_e)


def test_mass_block_spec_validation():
    phi_e = FourierField.zeros(2, (2, 2))
    with pytest.raises(ValueError, match="real"):
        MassBlockSpec(np.eye(1) * 1j, np.eye(1), phi_e)
    with pytest.raises(ValueError, match="equal dimensions"):
        MassBlockSpec(np.eye(1), np.eye(2), phi_e)
    masses = MassBlockSpec(np.eye(1), 2 * np.eye(1), phi_e)
    assert masses.v == 1 and masses.e == 2
    assert masses.dirac_twist().value_shape == (3, 3)
    assert masses.majorana_twist()[0, 0] == 2.0
