"""
Tests for Dirac-type operators and their decompositions
"""
import numpy as np
import pytest

from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.dirac_ops import (
    ConnectionSpec,
    DiracOperatorSpec,
    apply,
    bochner,
    bochner_defining_residual,
    build_real_simple_type,
    composition_residual,
    difference_anticommutes,
    dirac_equation_residual,
    dirac_plane_wave,
    dym_equation_residual,
    dym_mode_system,
    dym_op,
    dym_operator_residual,
    dym_plane_wave,
    dym_plane_wave_amplitudes,
    equation_residual,
    fermionic_action,
    is_real,
    is_simple_type,
    lichnerowicz_general,
    majorana_equation_residual,
    majorana_op,
    majorana_plane_wave,
    on_shell_momentum,
    on_shell_scale,
    plane_wave_amplitudes,
    plane_wave_dispersion,
    potential_V_D,
    real_form_operator,
    reality_residual,
    shares_bochner_connection,
)
from dirac_verify.core.fourier_fields import FormField, FourierField
from dirac_verify.core.graded_modules import MassBlockSpec, build_real_form_module, build_stm_module
from dirac_verify.core.lagrangians import majorana_signature
from dirac_verify.core.sampling import (
    random_clifford_potential,
    random_complex,
    random_endo,
    random_masses,
    random_operator,
    random_scalar,
    random_section,
)
from dirac_verify.models import Signature, TwistDims
from tests.conftest import CAPACITY


def _constant_operator(module, phi):
    conn = ConnectionSpec.flat(module, CAPACITY)
    return DiracOperatorSpec(conn, FourierField.constant(phi, module.sig.n, CAPACITY))


def test_flat_operator_on_plane_wave(module2, rng):
    D = _constant_operator(module2, np.zeros((8, 8)))
    u = rng.standard_normal(8)
    k = (1, -1)
    psi = FourierField.plane_wave(k, u, CAPACITY)
    expected = 1j * module2.gamma_of(k) @ u
    assert np.allclose(apply(D, psi).mode(k), expected)


def test_non_clifford_connection_is_rejected(module2, rng):
    potential = FormField.from_list([random_endo(rng, module2, 1, CAPACITY) for _ in range(2)])
    conn = ConnectionSpec(module2, potential)
    assert not conn.clifford_flag
    with pytest.raises(ValueError, match="not Clifford"):
        DiracOperatorSpec(conn, FourierField.zeros(2, (8, 8), CAPACITY))


def test_apply_checks_section_shape(module2):
    D = _constant_operator(module2, np.eye(8))
    with pytest.raises(ValueError, match="does not fit"):
        apply(D, FourierField.zeros(2, (4,), CAPACITY))


def test_bochner_remainder_of_scalar_mass(module2):
    D = _constant_operator(module2, 0.7 * np.eye(8))
    data = bochner(D, with_potential=False)
    # Phi_D = (1 - n) m for a scalar mass
    assert np.allclose(data.phi_D.zero_mode(), (1 - 2) * 0.7 * np.eye(8))
    assert not is_simple_type(D)


def test_chirality_mass_is_simple_type(module2):
    D = _constant_operator(module2, module2.chirality)
    assert is_simple_type(D)
    assert bochner(D, with_potential=False).alpha.max_abs() < 1e-14


def test_composition_matches_decomposition(module2, rng):
    D1 = random_operator(rng, module2, 1, CAPACITY)
    D2 = random_operator(rng, module2, 1, CAPACITY)
    psi = random_section(rng, module2, 1, CAPACITY)
    assert composition_residual(D1, D2, psi) < 1e-9
    assert composition_residual(D1, D1, psi) < 1e-9


def test_square_uses_bochner_connection(module2, rng):
    D = random_operator(rng, module2, 1, CAPACITY)
    data = bochner(D, with_potential=False)
    decomposition = lichnerowicz_general(D, D)
    assert (decomposition.alpha - data.alpha).max_abs() < 1e-12


def test_bochner_defining_relation(sig2_any, rng):
    from dirac_verify.core.graded_modules import TwistData, build_twisted_module

    module = build_twisted_module(sig2_any, TwistData(w=1))
    D = random_operator(rng, module, 1, CAPACITY)
    f = random_scalar(rng, 2, 1, CAPACITY)
    psi = random_section(rng, module, 1, CAPACITY)
    assert bochner_defining_residual(D, f, psi) < 1e-9


def test_potential_identity(module2, rng):
    D = random_operator(rng, module2, 1, CAPACITY)
    assert potential_V_D(D).residual < 1e-9


def test_clifford_shift_keeps_bochner_class(module2, rng):
    D = random_operator(rng, module2, 1, CAPACITY)
    shift = random_clifford_potential(rng, module2, 1, CAPACITY)
    shifted = DiracOperatorSpec(D.conn.shifted(shift), D.phi)
    assert not shares_bochner_connection(D, shifted)
    chirality_term = FourierField.constant(module2.chirality, 2, CAPACITY)
    other = D.with_phi(D.phi + chirality_term)
    assert difference_anticommutes(D, other)
    assert shares_bochner_connection(D, other)


def test_real_form_operator_is_real(module2, rng):
    D = random_operator(rng, module2, 1, CAPACITY)
    E = build_real_form_module(module2)
    real = real_form_operator(module2, D, E)
    assert real.module.dim == 16
    assert is_real(real)
    # gamma^cc = -gamma on the twisted module itself
    assert reality_residual(D) > 1.0


def test_majorana_operator_is_real_simple_type(majorana2):
    maj = majorana_op(majorana2, 1.3 * np.eye(majorana2.dim), capacity=CAPACITY)
    assert maj.branch == -1
    assert is_real(maj.op)
    assert is_simple_type(maj.op)


def test_real_simple_type_parity_is_enforced(module2):
    chi_even = FourierField.constant(np.eye(8), 2, CAPACITY)
    with pytest.raises(ValueError, match="odd"):
        build_real_simple_type(module2, chi=chi_even, capacity=CAPACITY)
    with pytest.raises(ValueError, match="takes mu"):
        build_real_simple_type(module2, chi_prime=chi_even, capacity=CAPACITY)


def test_dirac_plane_wave_solves_equation(majorana2):
    sig = majorana2.sig
    k = on_shell_momentum(sig)
    mass = np.eye(majorana2.dim)
    basis = plane_wave_amplitudes(majorana2, k, mass)
    assert basis.shape[1] == majorana2.dim // 2
    chi = dirac_plane_wave(k, basis[:, 0], CAPACITY)
    conn = ConnectionSpec.flat(majorana2, CAPACITY)
    residual = dirac_equation_residual(conn, mass, chi)
    assert residual.total < 1e-12
    assert plane_wave_dispersion(sig, k, 1.0) == pytest.approx(0.0)


def test_majorana_plane_wave_is_self_conjugate(majorana2):
    k = on_shell_momentum(majorana2.sig)
    mass = np.eye(majorana2.dim)
    u = plane_wave_amplitudes(majorana2, k, mass)[:, 0]
    nu = majorana_plane_wave(majorana2, k, u, CAPACITY)
    assert (majorana2.conjugate_section(nu) - nu).max_abs() < 1e-14
    conn = ConnectionSpec.flat(majorana2, CAPACITY)
    assert majorana_equation_residual(conn, mass, nu).total < 1e-12


def test_no_on_shell_direction():
    sig = Signature(p=2, q=0, epsilon=-1)
    assert on_shell_momentum(sig) is None


def test_unknown_equation_kind():
    with pytest.raises(ValueError, match="unknown equation kind"):
        equation_residual("tachyon")


def test_fermionic_action_is_quadratic(module2, rng):
    D = _constant_operator(module2, module2.chirality)
    psi = random_section(rng, module2, 1, CAPACITY)
    assert fermionic_action(D, 2.0 * psi) == pytest.approx(4.0 * fermionic_action(D, psi))


def test_gamma_matrices_are_shared(module2):
    assert np.allclose(module2.gammas[0], np.kron(cf.gamma_matrices(module2.sig)[0], np.eye(2)))


@pytest.fixture
def stm2():
    return build_stm_module(majorana_signature(2), TwistDims(v_r=1, v_l=1, e_r=1, e_l=0))


def _dym_builder(stm):
    n = stm.W.sig.n
    flat = FormField.zeros(n, 1, (stm.W.dim, stm.W.dim), CAPACITY)

    def build(m_d, m_m, phi_e):
        return dym_op(stm, flat, MassBlockSpec(m_d, m_m, FourierField.constant(phi_e, n, CAPACITY)))
    return build


def _on_shell_masses(stm, rng):
    """Random symmetric m_D, m_M and Hermitian phi_e, each block scaled on shell"""
    dims = stm.dims
    build = _dym_builder(stm)
    k = on_shell_momentum(stm.W.sig)
    m_d, m_m = random_masses(rng, dims.v)
    h = random_complex(rng, (dims.e, dims.e))
    phi_e = 0.5 * (h + h.conj().T)
    massless = dym_mode_system(build(0 * m_d, 0 * m_m, 0 * phi_e), k)
    s = on_shell_scale(massless, dym_mode_system(build(m_d, m_m, 0 * phi_e), k))
    t = on_shell_scale(massless, dym_mode_system(build(0 * m_d, 0 * m_m, phi_e), k))
    assert s is not None and t is not None
    return k, (s * m_d, s * m_m, t * phi_e)


def _coupled_wave(stm, dym, k, rng):
    basis = dym_plane_wave_amplitudes(dym, k)
    assert basis.shape[1] > 0
    return dym_plane_wave(stm.W, k, basis @ random_complex(rng, (basis.shape[1],)), CAPACITY)


def test_dym_plane_wave_solves_coupled_mass_system(stm2, rng):
    k, (m_d, m_m, phi_e) = _on_shell_masses(stm2, rng)
    dym = _dym_builder(stm2)(m_d, m_m, phi_e)
    chi = _coupled_wave(stm2, dym, k, rng)
    norm = chi.l2_norm()
    assert (stm2.W.blocks["nu"] @ chi).max_abs() > 1e-3
    assert (stm2.W.blocks["e"] @ chi).max_abs() > 1e-3
    assert dym_equation_residual(dym, chi).total < 1e-9 * norm
    assert dym_operator_residual(dym, chi) < 1e-9 * norm


def test_dym_plane_wave_feels_the_majorana_sign(stm2, rng):
    k, (m_d, m_m, phi_e) = _on_shell_masses(stm2, rng)
    build = _dym_builder(stm2)
    chi = _coupled_wave(stm2, build(m_d, m_m, phi_e), k, rng)
    norm = chi.l2_norm()
    flipped = build(m_d, -m_m, phi_e)
    assert dym_operator_residual(flipped, chi) > 1e-3 * norm
    assert dym_equation_residual(flipped, chi).total > 1e-3 * norm
    swapped = build(m_m, m_d, phi_e)
    assert dym_operator_residual(swapped, chi) > 1e-3 * norm


def test_dym_mode_system_needs_constant_masses(stm2, rng):
    dims = stm2.dims
    n = stm2.W.sig.n
    flat = FormField.zeros(n, 1, (stm2.W.dim, stm2.W.dim), CAPACITY)
    phi_e = FourierField.plane_wave((1, 0), np.eye(dims.e), CAPACITY)
    dym = dym_op(stm2, flat, MassBlockSpec(np.eye(dims.v), np.eye(dims.v), phi_e))
    with pytest.raises(ValueError, match="constant"):
        dym_mode_system(dym, on_shell_momentum(stm2.W.sig))


def test_on_shell_scale_of_a_scalar_mass(majorana2):
    k = on_shell_momentum(majorana2.sig)
    eye = np.eye(majorana2.dim)
    massless = majorana2.gamma_of(k)
    massive = massless + 0.5 * eye
    assert abs(on_shell_scale(massless, massive)) == pytest.approx(2.0)
