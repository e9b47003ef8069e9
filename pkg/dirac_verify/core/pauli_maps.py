"""
Pauli-type lifts of real Dirac operators to the doubled module P = 2E.

    P_D  = D (x) 1 + i slashF_D (x) I2           (Pauli map)
    pi_D = D (x) 1 + i tau_E slashF_D,op (x) I2  (opposite-action variant)

Doubling is the major Kronecker factor: M (x) B is np.kron(M, B).
"""
from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.dirac_ops import (
    ConnectionSpec,
    DecompositionData,
    DiracOperatorSpec,
    apply,
    bochner,
    curvature,
    dirac_connection,
    is_real,
    majorana_op,
    majorana_plane_wave,
    on_shell_momentum,
    plane_wave_amplitudes,
    reality_residual,
    simple_type_residual,
)
from dirac_verify.core.fourier_fields import FourierField, FormField, covariant_exterior, l2_pairing, product
from dirac_verify.core.graded_modules import I2, ONE2, ModuleDescriptor, diagonal_embed, double

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RelativeCurvature:
    """Curvature of the Dirac connection and its quantizations (Riemann part vanishes on the torus)"""
    F: FormField
    slash: FourierField
    slash_op: Optional[FourierField] = None


def curvature_coefficient(n: int) -> float:
    return (n - 1) / n


def relative_curvature(D: DiracOperatorSpec, data: Optional[DecompositionData] = None) -> RelativeCurvature:
    """Direct route: curv(d_D) quantized with gamma (and gamma_op for simple-type operators on bi-modules)"""
    data = data or bochner(D, with_potential=False)
    F = curvature(dirac_connection(D, data))
    slash = cf.quantize_form(D.gammas, F.components)
    slash_op = None
    if D.module.op_gammas is not None and simple_type_residual(D, data) <= settings.pointwise_tolerance * max(
            1.0, D.phi.max_abs()):
        slash_op = simple_type_curvature(D, data, opposite=True)
    return RelativeCurvature(F=F, slash=slash, slash_op=slash_op)


def simple_type_curvature(D: DiracOperatorSpec, data: Optional[DecompositionData] = None,
                          opposite: bool = False) -> FourierField:
    """
    Closed form for simple type with Bochner connection B and Z = Phi_D:

        slashF = delta(F_B) + ((n-1)/n) (delta(d_B Z) + Z^2)

    delta is the left quantization, or the opposite one when opposite=True.
    """
    data = data or bochner(D, with_potential=False)
    gammas = D.module.op_gammas if opposite else D.gammas
    if gammas is None:
        raise ValueError(f"{D.module.kind} module carries no opposite Clifford action")
    conn_B = D.conn.shifted(data.alpha)
    Z = data.phi_D
    F_B = curvature(conn_B)
    dZ = covariant_exterior(conn_B.potential, FormField.scalar(Z))
    c = curvature_coefficient(D.sig.n)
    return cf.quantize_form(gammas, F_B.components) + c * (
        cf.quantize_form(gammas, dZ.components) + product(Z, Z)
    )


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """Lifted operator on P together with the curvature endomorphism it adds"""
    op: DiracOperatorSpec
    curvature_endo: FourierField
    relative: RelativeCurvature


def _require_real(D: DiracOperatorSpec):
    if not is_real(D):
        raise ValueError(f"operator is not real (J-conjugation defect {reality_residual(D):.3e})")


def _lift(D: DiracOperatorSpec, curvature_endo: FourierField, P: Optional[ModuleDescriptor]) -> DiracOperatorSpec:
    P = P or double(D.module)
    potential = D.conn.potential.map(lambda a: a.kron_left(ONE2))
    phi = D.phi.kron_left(ONE2) + curvature_endo.kron_left(I2)
    return DiracOperatorSpec(ConnectionSpec(P, potential), phi)


def pauli_map(D: DiracOperatorSpec, P: Optional[ModuleDescriptor] = None) -> PauliOperator:
    """
    P_D = D (x) 1 + i slashF_D (x) I2 on the doubling of a real module.

    Raises:
        ValueError: if D is not real
    """
    _require_real(D)
    relative = relative_curvature(D)
    endo = 1j * relative.slash
    return PauliOperator(op=_lift(D, endo, P), curvature_endo=endo, relative=relative)


def pi_map(D: DiracOperatorSpec, P: Optional[ModuleDescriptor] = None) -> PauliOperator:
    """
    pi_D = D (x) 1 + i tau slashF_D,op (x) I2 for a real simple-type operator on a bi-module.

    Raises:
        ValueError: without opposite action, for non-real or non-simple-type input
    """
    if D.module.op_gammas is None:
        raise ValueError(f"{D.module.kind} module carries no opposite Clifford action")
    _require_real(D)
    data = bochner(D, with_potential=False)
    defect = simple_type_residual(D, data)
    if defect > settings.pointwise_tolerance * max(1.0, D.phi.max_abs()):
        raise ValueError(f"pi map needs an operator of simple type (anticommutator defect {defect:.3e})")
    relative = relative_curvature(D, data)
    endo = 1j * (D.module.tau @ relative.slash_op)
    return PauliOperator(op=_lift(D, endo, P), curvature_endo=endo, relative=relative)


@dataclass(frozen=True)
class FermionicEquivalence:
    lhs: complex
    rhs: complex
    residual: float
    pointwise_residual: float


def pointwise_pairing(psi: FourierField, phi: FourierField, form: np.ndarray) -> FourierField:
    """x -> <psi(x), G phi(x)>"""
    return product(psi.conjugate(), form @ phi)


def fermionic_equivalence(D: DiracOperatorSpec, psi: FourierField,
                          pauli: Optional[PauliOperator] = None) -> FermionicEquivalence:
    """<2psi, P_D 2psi>_P against <psi, D psi>_E, integrated and pointwise"""
    pauli = pauli or pauli_map(D)
    big = diagonal_embed(psi)
    lifted = apply(pauli.op, big)
    direct = apply(D, psi)
    lhs = l2_pairing(big, lifted, pauli.op.module.form)
    rhs = l2_pairing(psi, direct, D.module.form)
    scale = max(1.0, abs(rhs))
    pointwise = pointwise_pairing(big, lifted, pauli.op.module.form) - pointwise_pairing(psi, direct, D.module.form)
    return FermionicEquivalence(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs) / scale,
                                pointwise_residual=pointwise.max_abs() / scale)


@dataclass(frozen=True, eq=False)
class KernelWitness:
    """
    A section in ker(D) outside ker(F): the Pauli lift keeps the pairing but
    not the kernel, and P_D leaves the simple-type class.
    """
    op: DiracOperatorSpec
    pauli: PauliOperator
    psi: FourierField
    kernel_residual: float
    curvature_norm: float
    pauli_simple_type_defect: float


def pauli_witness(W: ModuleDescriptor, mass: float = 1.0, capacity: int = 6) -> Optional[KernelWitness]:
    """
    Majorana operator with constant mass m and an on-shell Majorana plane wave.

    Returns None when the signature has no on-shell direction.
    """
    k = on_shell_momentum(W.sig)
    if k is None:
        return None
    mass_matrix = mass * np.eye(W.dim, dtype=complex)
    basis = plane_wave_amplitudes(W, k, mass_matrix)
    if basis.shape[1] == 0:
        return None
    chi = majorana_plane_wave(W, k, basis[:, 0], capacity)
    D = majorana_op(W, mass_matrix, capacity=capacity).op
    psi = FourierField.stack([chi, W.conjugate_section(chi)])
    pauli = pauli_map(D)
    return KernelWitness(
        op=D,
        pauli=pauli,
        psi=psi,
        kernel_residual=apply(D, psi).l2_norm() / max(1.0, psi.l2_norm()),
        curvature_norm=(pauli.curvature_endo @ psi).l2_norm() / max(1.0, psi.l2_norm()),
        pauli_simple_type_defect=simple_type_residual(pauli.op),
    )
