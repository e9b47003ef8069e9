"""
Dirac-type operators D = sum_k gamma^k (d_k + A_k) + Phi on band-limited sections.

Operators are specs (connection + zero-order part). Their first- and
second-order decompositions are assembled symbolically and validated by
application to random sections.

Conventions:
    Delta_B = epsilon sum_k eta_k (d_k + A_k + alpha_k)^2
    D^2 = Delta_B + V_D
    delta_g df = epsilon sum_j eta_j d_j^2 f, so that
    2 sum_k eta_k d_k f B_k psi = epsilon ([D^2, f] - delta_g df) psi.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import logging

import numpy as np
import scipy.linalg

from dirac_verify.config import settings
from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.fourier_fields import (
    FourierField,
    FormField,
    covariant_exterior,
    divergence,
    ev_g,
    exterior_derivative,
    l2_pairing,
    laplacian,
    wedge,
)
from dirac_verify.core.graded_modules import (
    I2,
    ONE2,
    MassBlockSpec,
    ModuleDescriptor,
    STMModule,
    build_dirac_module,
    build_real_form_module,
    real_form_endo,
)
from dirac_verify.models import Signature

logger = logging.getLogger(__name__)


def _as_field(value, n: int, capacity: int) -> FourierField:
    if isinstance(value, FourierField):
        return value
    return FourierField.constant(value, n, capacity)


def _scale(*values) -> float:
    return max([1.0] + [float(v) for v in values])


@dataclass(frozen=True, eq=False)
class ConnectionSpec:
    """
    Flat spectral derivative plus an endomorphism-valued one-form A.

    clifford_flag records whether every A_k commutes with every gamma^j.
    """
    module: ModuleDescriptor
    potential: FormField
    clifford_flag: bool = field(init=False)

    def __post_init__(self):
        if self.potential.degree != 1 or self.potential.n != self.module.sig.n:
            raise ValueError("connection potential must be a one-form on the module's torus")
        object.__setattr__(self, "clifford_flag", self.clifford_residual() <= settings.pointwise_tolerance * _scale(
            self.potential.max_abs()))

    @classmethod
    def flat(cls, module: ModuleDescriptor, capacity: int) -> "ConnectionSpec":
        return cls(module, FormField.zeros(module.sig.n, 1, (module.dim, module.dim), capacity))

    @property
    def capacity(self) -> int:
        return min(f.capacity for f in self.potential.components.values())

    def clifford_residual(self) -> float:
        worst = 0.0
        for a in self.potential.as_list():
            for g in self.module.gammas:
                worst = max(worst, cf.commutator(a, g).max_abs())
        return worst

    def covariant(self, psi: FourierField, k: int) -> FourierField:
        """d_k psi + A_k psi"""
        return psi.derive(k) + self.potential[k] @ psi

    def covariant_endo(self, X: FourierField, k: int) -> FourierField:
        """d_k X + [A_k, X]"""
        a = self.potential[k]
        return X.derive(k) + a @ X - X @ a

    def shifted(self, shift: FormField) -> "ConnectionSpec":
        return ConnectionSpec(self.module, self.potential + shift)


@dataclass(frozen=True, eq=False)
class DiracOperatorSpec:
    """D = delta_gamma(d + A) + Phi with a Clifford connection A"""
    conn: ConnectionSpec
    phi: FourierField

    def __post_init__(self):
        if not self.conn.clifford_flag:
            raise ValueError(
                f"connection is not Clifford: max |[A_k, gamma^j]| = {self.conn.clifford_residual():.3e}"
            )
        if self.phi.value_shape != (self.module.dim, self.module.dim):
            raise ValueError(f"zero-order part has shape {self.phi.value_shape}, module dim is {self.module.dim}")

    @property
    def module(self) -> ModuleDescriptor:
        return self.conn.module

    @property
    def sig(self) -> Signature:
        return self.conn.module.sig

    @property
    def gammas(self) -> np.ndarray:
        return self.conn.module.gammas

    @property
    def capacity(self) -> int:
        return min(self.conn.capacity, self.phi.capacity)

    def with_phi(self, phi: FourierField) -> "DiracOperatorSpec":
        return DiracOperatorSpec(self.conn, phi)

    def __call__(self, psi: FourierField) -> FourierField:
        return apply(self, psi)

    def describe(self) -> dict:
        return {
            "module": self.module.describe(),
            "potential_degree": max(f.degree for f in self.conn.potential.components.values()),
            "phi_degree": self.phi.degree,
            "clifford": self.conn.clifford_flag,
            "phi_max_abs": self.phi.max_abs(),
        }


@dataclass(frozen=True, eq=False)
class DecompositionData:
    """Bochner shift, zero-order remainder, Dirac form, Dirac vector field and potential"""
    alpha: FormField
    phi_D: FourierField
    omega: FormField
    xi: List[FourierField]
    potential: Optional[FourierField] = None


@dataclass(frozen=True, eq=False)
class GeneralDecomposition:
    """Second-order decomposition of a composition H = D1 D2"""
    alpha: FormField
    connection: ConnectionSpec
    potential: Optional[FourierField] = None


def slash_derivative(conn: ConnectionSpec, psi: FourierField) -> FourierField:
    """sum_k gamma^k (d_k + A_k) psi"""
    total = None
    for k, g in enumerate(conn.module.gammas):
        term = g @ conn.covariant(psi, k)
        total = term if total is None else total + term
    return total


def apply(D: DiracOperatorSpec, psi: FourierField) -> FourierField:
    if psi.value_shape != (D.module.dim,):
        raise ValueError(f"section of shape {psi.value_shape} does not fit module dim {D.module.dim}")
    return slash_derivative(D.conn, psi) + D.phi @ psi


def slash(gammas: np.ndarray, form: FormField):
    """delta_gamma of an End-valued one-form: sum_k gamma^k form_k"""
    return cf.quantize_form(gammas, form.components)


def curvature(conn: ConnectionSpec) -> FormField:
    """F = dA + A^A"""
    return exterior_derivative(conn.potential) + wedge(conn.potential, conn.potential)


def bochner_shift(D: DiracOperatorSpec) -> FormField:
    """alpha_k = (epsilon/2) eta_k {gamma^k, Phi}"""
    sig = D.sig
    return FormField.from_list([
        (0.5 * sig.epsilon * float(sig.eta[k])) * cf.anticommutator(g, D.phi)
        for k, g in enumerate(D.gammas)
    ])


def bochner(D: DiracOperatorSpec, with_potential: bool = True) -> DecompositionData:
    """
    Canonical decomposition D = slash(d_B) + Phi_D with d_B = d_A + alpha.

    Dirac form omega = ext_Theta(Phi_D), Dirac vector field xi = -epsilon (tr omega)^#.
    """
    sig = D.sig
    alpha = bochner_shift(D)
    phi_D = D.phi - slash(D.gammas, alpha)
    theta = cf.theta_components(sig, D.gammas)
    omega = FormField.from_list([theta[(k,)] @ phi_D for k in range(sig.n)])
    xi = [(-sig.epsilon * float(sig.eta[k])) * omega[k].trace() for k in range(sig.n)]
    potential = lichnerowicz_general(D, D).potential if with_potential else None
    return DecompositionData(alpha=alpha, phi_D=phi_D, omega=omega, xi=xi, potential=potential)


def bochner_connection(D: DiracOperatorSpec, data: Optional[DecompositionData] = None) -> ConnectionSpec:
    data = data or bochner(D, with_potential=False)
    return D.conn.shifted(data.alpha)


def dirac_connection(D: DiracOperatorSpec, data: Optional[DecompositionData] = None) -> ConnectionSpec:
    """d_D = d_B + omega"""
    data = data or bochner(D, with_potential=False)
    return D.conn.shifted(data.alpha + data.omega)


def laplacian_B(conn: ConnectionSpec, psi: FourierField) -> FourierField:
    """epsilon sum_k eta_k nabla_k nabla_k psi for an arbitrary connection"""
    sig = conn.module.sig
    total = None
    for k in range(sig.n):
        term = (sig.epsilon * float(sig.eta[k])) * conn.covariant(conn.covariant(psi, k), k)
        total = term if total is None else total + term
    return total


def codifferential_exact(sig: Signature, f: FourierField) -> FourierField:
    """delta_g df in the convention fixed in the module docstring"""
    return sig.epsilon * laplacian(sig, f)


def bochner_defining_residual(D: DiracOperatorSpec, f: FourierField, psi: FourierField,
                              data: Optional[DecompositionData] = None) -> float:
    """
    Relative L2 residual of 2 sum_k eta_k d_k f B_k psi = epsilon ([D^2, f] - delta_g df) psi
    """
    sig = D.sig
    conn_B = bochner_connection(D, data)
    lhs = None
    for k in range(sig.n):
        term = (2.0 * float(sig.eta[k])) * (f.derive(k) * conn_B.covariant(psi, k))
        lhs = term if lhs is None else lhs + term
    commutator = apply(D, apply(D, f * psi)) - f * apply(D, apply(D, psi))
    rhs = sig.epsilon * (commutator - codifferential_exact(sig, f) * psi)
    return (lhs - rhs).l2_norm() / _scale(rhs.l2_norm())


def lichnerowicz_general(D1: DiracOperatorSpec, D2: DiracOperatorSpec) -> GeneralDecomposition:
    """
    Decomposition of H = D1 D2 as Delta_H + V_H with nabla_H = nabla_2 + alpha_H.

    With T = A1 - A2 and Psi1 = Phi1 + slash(T):
        alpha_H,k = (epsilon/2) eta_k (gamma^k Phi2 + Psi1 gamma^k)
        V_H = delta_gamma(F2) + sum_k gamma^k nabla_k Phi2 + Psi1 Phi2
              - epsilon sum_k eta_k (nabla_k alpha_H,k + alpha_H,k^2)
    """
    if D1.module is not D2.module and D1.module.dim != D2.module.dim:
        raise ValueError("composed operators must act on the same module")
    sig = D2.sig
    gammas = D2.gammas
    conn = D2.conn
    T = D1.conn.potential - D2.conn.potential
    psi1 = D1.phi + slash(gammas, T)
    alpha = FormField.from_list([
        (0.5 * sig.epsilon * float(sig.eta[k])) * (gammas[k] @ D2.phi + psi1 @ gammas[k])
        for k in range(sig.n)
    ])
    F2 = curvature(conn)
    potential = cf.quantize_form(gammas, F2.components) + psi1 @ D2.phi
    for k in range(sig.n):
        a = alpha[k]
        weight = sig.epsilon * float(sig.eta[k])
        potential = potential + gammas[k] @ conn.covariant_endo(D2.phi, k)
        potential = potential - weight * (conn.covariant_endo(a, k) + a @ a)
    return GeneralDecomposition(alpha=alpha, connection=conn.shifted(alpha), potential=potential)


def composition_residual(D1: DiracOperatorSpec, D2: DiracOperatorSpec, psi: FourierField,
                         decomposition: Optional[GeneralDecomposition] = None) -> float:
    """Relative residual of D1 D2 psi - Delta_H psi - V_H psi"""
    decomposition = decomposition or lichnerowicz_general(D1, D2)
    direct = apply(D1, apply(D2, psi))
    assembled = laplacian_B(decomposition.connection, psi) + decomposition.potential @ psi
    return (direct - assembled).l2_norm() / _scale(direct.l2_norm(), psi.l2_norm())


@dataclass(frozen=True, eq=False)
class PotentialIdentity:
    """Both sides of tr V_D = tr_gamma(curv(d_D) - epsilon ev_g(omega^2)) + div xi"""
    trace_potential: FourierField
    curvature_term: FourierField
    omega_term: FourierField
    div_xi: FourierField

    @property
    def lagrangian(self) -> FourierField:
        return self.curvature_term - self.omega_term

    @property
    def residual(self) -> float:
        difference = self.trace_potential - self.lagrangian - self.div_xi
        return difference.max_abs() / _scale(self.trace_potential.max_abs())


def potential_V_D(D: DiracOperatorSpec, data: Optional[DecompositionData] = None) -> PotentialIdentity:
    data = data or bochner(D)
    sig = D.sig
    F = curvature(dirac_connection(D, data))
    curvature_term = cf.quantize_form(D.gammas, F.components).trace()
    omega_term = sig.epsilon * ev_g(sig, data.omega).trace()
    return PotentialIdentity(
        trace_potential=data.potential.trace(),
        curvature_term=curvature_term,
        omega_term=omega_term,
        div_xi=divergence(data.xi),
    )


def simple_type_residual(D: DiracOperatorSpec, data: Optional[DecompositionData] = None) -> float:
    """max_k |{Phi_D, gamma^k}|"""
    phi_D = (data or bochner(D, with_potential=False)).phi_D
    return max(cf.anticommutator(g, phi_D).max_abs() for g in D.gammas)


def is_simple_type(D: DiracOperatorSpec, atol: Optional[float] = None) -> bool:
    atol = settings.pointwise_tolerance if atol is None else atol
    return simple_type_residual(D) <= atol * _scale(D.phi.max_abs())


def zero_order_difference(D1: DiracOperatorSpec, D2: DiracOperatorSpec) -> FourierField:
    """D1 - D2 as an endomorphism field"""
    return D1.phi - D2.phi + slash(D1.gammas, D1.conn.potential - D2.conn.potential)


def shares_bochner_connection(D1: DiracOperatorSpec, D2: DiracOperatorSpec, atol: Optional[float] = None) -> bool:
    atol = settings.pointwise_tolerance if atol is None else atol
    b1 = D1.conn.potential + bochner_shift(D1)
    b2 = D2.conn.potential + bochner_shift(D2)
    return (b1 - b2).max_abs() <= atol * _scale(b1.max_abs())


def difference_anticommutes(D1: DiracOperatorSpec, D2: DiracOperatorSpec, atol: Optional[float] = None) -> bool:
    atol = settings.pointwise_tolerance if atol is None else atol
    delta = zero_order_difference(D1, D2)
    worst = max(cf.anticommutator(g, delta).max_abs() for g in D1.gammas)
    return worst <= atol * _scale(delta.max_abs())


# ----- reality ---------------------------------------------------------------

def real_form_operator(S: ModuleDescriptor, D: DiracOperatorSpec, E: Optional[ModuleDescriptor] = None) -> DiracOperatorSpec:
    """diag(D, D^cc) on E = 2S"""
    E = E or build_real_form_module(S)
    potential = D.conn.potential.map(lambda a: real_form_endo(S, a))
    return DiracOperatorSpec(ConnectionSpec(E, potential), real_form_endo(S, D.phi))


def reality_residual(D: DiracOperatorSpec) -> float:
    """max deviation of gamma, A and Phi from their J-conjugates"""
    m = D.module
    if not m.is_real:
        raise ValueError(f"{m.kind} module has no real structure")
    worst = max(float(np.max(np.abs(m.conjugate_endo(g) - g))) for g in m.gammas)
    for a in D.conn.potential.as_list():
        worst = max(worst, (m.conjugate_endo(a) - a).max_abs())
    return max(worst, (m.conjugate_endo(D.phi) - D.phi).max_abs())


def is_real(D: DiracOperatorSpec, atol: Optional[float] = None) -> bool:
    atol = settings.pointwise_tolerance if atol is None else atol
    return reality_residual(D) <= atol * _scale(D.phi.max_abs())


# ----- real operators of simple type ----------------------------------------

def _require_end_gamma(S: ModuleDescriptor, X: FourierField, parity: int, name: str):
    scale = _scale(X.max_abs())
    tol = settings.pointwise_tolerance * scale
    gamma_defect = max(cf.commutator(g, X).max_abs() for g in S.gammas)
    if gamma_defect > tol:
        raise ValueError(f"{name} does not commute with gamma (defect {gamma_defect:.3e})")
    parity_defect = (S.tau @ X @ S.tau - parity * X).max_abs()
    if parity_defect > tol:
        label = "even" if parity > 0 else "odd"
        raise ValueError(f"{name} is not {label} with respect to tau (defect {parity_defect:.3e})")


def double_bracket_residual(S: ModuleDescriptor, phi_S: FourierField, s: int) -> float:
    """max |[[Phi_S, gamma^a]_+, gamma^b]_-| for s = +1, brackets swapped for s = -1"""
    inner = cf.anticommutator if s > 0 else cf.commutator
    outer = cf.commutator if s > 0 else cf.anticommutator
    worst = 0.0
    for ga in S.gammas:
        bracket = inner(phi_S, ga)
        for gb in S.gammas:
            worst = max(worst, outer(bracket, gb).max_abs())
    return worst


@dataclass(frozen=True, eq=False)
class RealSimpleType:
    """Real simple-type operator on E = 2S with its off-diagonal block Phi_S"""
    op: DiracOperatorSpec
    phi_S: FourierField
    branch: int


def build_real_simple_type(
    S: ModuleDescriptor,
    potential: Optional[FormField] = None,
    chi=None,
    sigma: Optional[FormField] = None,
    chi_prime=None,
    mu=None,
    capacity: Optional[int] = None,
    E: Optional[ModuleDescriptor] = None,
) -> RealSimpleType:
    """
    Most general real simple-type operator on the real form of S.

    The branch s is read from gamma^cc = s gamma on S:
        s = +1: phi = chi' + tau delta_gamma(sigma), chi' even
        s = -1: phi = tau mu + delta_gamma(sigma), mu even
    with chi and sigma odd; all inputs commute with gamma. The operator is
    slash(d_A) + [[tau chi, (tau phi)^cc], [tau phi, (tau chi)^cc]].

    Raises:
        ValueError: on inputs of the wrong parity or without gamma-invariance
    """
    n = S.sig.n
    if capacity is None:
        capacity = potential.components[(0,)].capacity if potential is not None else settings.capacity_for(
            settings.default_band)
    s = S.flags.s_J_gamma
    if s is None:
        raise ValueError(f"{S.kind} module has no real structure")
    d = S.dim
    zero = FourierField.zeros(n, (d, d), capacity)
    chi = zero if chi is None else _as_field(chi, n, capacity)
    _require_end_gamma(S, chi, -1, "chi")
    if sigma is not None:
        for k, component in enumerate(sigma.as_list()):
            _require_end_gamma(S, component, -1, f"sigma_{k}")
        sigma_part = slash(S.gammas, sigma)
    else:
        sigma_part = zero
    if s > 0:
        if mu is not None:
            raise ValueError("the gamma^cc = +gamma branch takes chi_prime, not mu")
        even = zero if chi_prime is None else _as_field(chi_prime, n, capacity)
        _require_end_gamma(S, even, +1, "chi_prime")
        phi_S = S.tau @ even + sigma_part
    else:
        if chi_prime is not None:
            raise ValueError("the gamma^cc = -gamma branch takes mu, not chi_prime")
        even = zero if mu is None else _as_field(mu, n, capacity)
        _require_end_gamma(S, even, +1, "mu")
        phi_S = even + S.tau @ sigma_part
    diagonal = S.tau @ chi
    phi_E = FourierField.block(
        [[diagonal, S.conjugate_endo(phi_S)], [phi_S, S.conjugate_endo(diagonal)]],
        n, capacity, (d, d),
    )
    E = E or build_real_form_module(S)
    if potential is None:
        potential = FormField.zeros(n, 1, (d, d), capacity)
    potential_E = potential.map(lambda a: real_form_endo(S, a))
    op = DiracOperatorSpec(ConnectionSpec(E, potential_E), phi_E)
    return RealSimpleType(op=op, phi_S=phi_S, branch=s)


def majorana_op(W: ModuleDescriptor, mass, potential: Optional[FormField] = None,
                capacity: Optional[int] = None, E: Optional[ModuleDescriptor] = None) -> RealSimpleType:
    """
    Majorana operator [[slash d, i m], [-i m, -slash d]] on 2W (mu = -i m).

    Requires the gamma^cc = -gamma branch.
    """
    if W.flags.s_J_gamma != -1:
        raise ValueError("the Majorana operator needs a module with gamma^cc = -gamma")
    capacity = capacity or settings.capacity_for(settings.default_band)
    mass = _as_field(mass, W.sig.n, capacity)
    return build_real_simple_type(W, potential=potential, mu=-1j * mass, capacity=capacity, E=E)


def dirac_yukawa_op(W: ModuleDescriptor, potential: FormField, phi: FourierField,
                    S: Optional[ModuleDescriptor] = None) -> DiracOperatorSpec:
    """
    D_D = slash(d_A) + i mu_D on S = 2W with mu_D = -tau_S (phi (x) eps2) = phi (x) I2.

    In blocks: [[0, slash(d_A) - i phi], [slash(d_A) + i phi, 0]].
    """
    defect = max(cf.commutator(g, phi).max_abs() for g in W.gammas)
    if defect > settings.pointwise_tolerance * _scale(phi.max_abs()):
        raise ValueError(f"Yukawa mass does not commute with gamma (defect {defect:.3e})")
    S = S or build_dirac_module(W)
    potential_S = potential.map(lambda a: a.kron_left(ONE2))
    return DiracOperatorSpec(ConnectionSpec(S, potential_S), 1j * phi.kron_left(I2))


@dataclass(frozen=True, eq=False)
class DYMOperator:
    """Dirac-Yukawa-Majorana operator slash(d_calA) + i mu on E with its ingredients"""
    op: DiracOperatorSpec
    mu: FourierField
    dirac_yukawa: DiracOperatorSpec
    stm: STMModule
    masses: MassBlockSpec
    potential_W: FormField


def dym_op(stm: STMModule, potential_W: FormField, masses: MassBlockSpec) -> DYMOperator:
    """
    Combine a Dirac-Yukawa operator on S with a constant Majorana mass on the
    neutrino block into a real simple-type operator on E.

    Raises:
        ValueError: if the connection does not vanish on the neutrino block
    """
    W = stm.W
    n = W.sig.n
    nu = W.blocks["nu"]
    for k, a in enumerate(potential_W.as_list()):
        leak = max((nu @ a).max_abs(), (a @ nu).max_abs())
        if leak > settings.pointwise_tolerance:
            raise ValueError(f"connection is not partially flat: component {k} touches the neutrino block ({leak:.3e})")
    capacity = masses.phi_e.capacity
    phi_W = stm.twist_lift(masses.dirac_twist())
    dirac_yukawa = dirac_yukawa_op(W, potential_W, phi_W, stm.S)
    m_M = np.kron(ONE2, stm.twist_lift(masses.majorana_twist()))
    majorana = FourierField.constant(1j * m_M, n, capacity)
    phi_S = dirac_yukawa.phi
    d = stm.S.dim
    phi_E = FourierField.block(
        [[phi_S, majorana], [-majorana, stm.S.conjugate_endo(phi_S)]], n, capacity, (d, d)
    )
    potential_E = dirac_yukawa.conn.potential.map(lambda a: real_form_endo(stm.S, a))
    op = DiracOperatorSpec(ConnectionSpec(stm.E, potential_E), phi_E)
    return DYMOperator(op=op, mu=-1j * phi_E, dirac_yukawa=dirac_yukawa, stm=stm,
                       masses=masses, potential_W=potential_W)


# ----- equations of motion ---------------------------------------------------

@dataclass(frozen=True)
class EquationResidual:
    """L2 residual of an equation of motion and of its chirality projections"""
    total: float
    right: float
    left: float


def _chiral_parts(W: ModuleDescriptor, chi: FourierField):
    eye = np.eye(W.dim)
    return 0.5 * (eye + W.chirality) @ chi, 0.5 * (eye - W.chirality) @ chi


def _mass_term(mass, chi: FourierField) -> FourierField:
    return mass @ chi


def _first_order_residual(conn: ConnectionSpec, chi: FourierField, dirac_mass=None,
                          majorana_mass=None) -> FourierField:
    """i slash(d_A) chi - phi chi - m chi^cc"""
    W = conn.module
    out = 1j * slash_derivative(conn, chi)
    if dirac_mass is not None:
        out = out - _mass_term(dirac_mass, chi)
    if majorana_mass is not None:
        out = out - _mass_term(majorana_mass, W.conjugate_section(chi))
    return out


def _split_residual(conn: ConnectionSpec, chi: FourierField, dirac_mass=None,
                    majorana_mass=None) -> EquationResidual:
    """
    Full residual and its chirality split:
        i slash(d) chi_R = phi chi_L + m chi_R^cc (and R <-> L)
    """
    W = conn.module
    right, left = _chiral_parts(W, chi)

    def projected(own: FourierField, other: FourierField) -> FourierField:
        out = 1j * slash_derivative(conn, own)
        if dirac_mass is not None:
            out = out - _mass_term(dirac_mass, other)
        if majorana_mass is not None:
            out = out - _mass_term(majorana_mass, W.conjugate_section(own))
        return out

    total = _first_order_residual(conn, chi, dirac_mass, majorana_mass).l2_norm()
    return EquationResidual(total=total, right=projected(right, left).l2_norm(),
                            left=projected(left, right).l2_norm())


def dirac_equation_residual(conn: ConnectionSpec, phi, chi: FourierField) -> EquationResidual:
    """i slash(d_A) chi = phi chi"""
    return _split_residual(conn, chi, dirac_mass=phi)


def majorana_equation_residual(conn: ConnectionSpec, mass, chi: FourierField) -> EquationResidual:
    """i slash(d_A) chi = m chi^cc"""
    return _split_residual(conn, chi, majorana_mass=mass)


def dym_equation_residual(dym: DYMOperator, chi: FourierField) -> EquationResidual:
    """i slash(d_A) chi = phi_D chi + m_M chi^cc on W"""
    stm = dym.stm
    conn = ConnectionSpec(stm.W, dym.potential_W)
    phi_W = stm.twist_lift(dym.masses.dirac_twist())
    m_M = stm.twist_lift(dym.masses.majorana_twist())
    return _split_residual(conn, chi, dirac_mass=phi_W, majorana_mass=m_M)


def lift_to_real_form(S: ModuleDescriptor, psi: FourierField) -> FourierField:
    """psi -> (psi, psi^cc) in E = 2S"""
    return FourierField.stack([psi, S.conjugate_section(psi)])


def lift_to_dirac(W: ModuleDescriptor, chi: FourierField, lower: Optional[FourierField] = None) -> FourierField:
    """(chi, lower) in S = 2W; the first block is tau_S = +1"""
    lower = 0 * chi if lower is None else lower
    return FourierField.stack([chi, lower])


def dym_operator_residual(dym: DYMOperator, chi: FourierField) -> float:
    """||D_YM Psi|| for Psi = (psi, psi^cc), psi = (chi, 0)"""
    psi = lift_to_dirac(dym.stm.W, chi)
    return apply(dym.op, lift_to_real_form(dym.stm.S, psi)).l2_norm()


def equation_residual(kind: str, **state) -> EquationResidual:
    """
    Dispatch by equation kind.

    kinds: dirac (conn, phi, chi), majorana (conn, mass, chi),
    dirac_yukawa (op, psi), dym (dym, chi)
    """
    if kind == "dirac":
        return dirac_equation_residual(state["conn"], state["phi"], state["chi"])
    if kind == "majorana":
        return majorana_equation_residual(state["conn"], state["mass"], state["chi"])
    if kind == "dirac_yukawa":
        op, psi = state["op"], state["psi"]
        total = apply(op, psi).l2_norm()
        parity = (op.module.tau @ psi - psi).l2_norm()
        return EquationResidual(total=total, right=parity, left=0.0)
    if kind == "dym":
        return dym_equation_residual(state["dym"], state["chi"])
    raise ValueError(f"unknown equation kind '{kind}'")


# ----- plane waves -----------------------------------------------------------

def on_shell_momentum(sig: Signature) -> Optional[np.ndarray]:
    """Unit integer momentum along the first direction with epsilon eta_j = +1"""
    directions = sig.on_shell_directions()
    if not directions:
        return None
    k = np.zeros(sig.n, dtype=int)
    k[directions[0]] = 1
    return k


def plane_wave_amplitudes(W: ModuleDescriptor, k: Sequence[int], mass: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ker(gamma(k) + M): amplitudes u with i slash(d) e^{ikx} u = M e^{ikx} u"""
    return scipy.linalg.null_space(W.gamma_of(k) + np.asarray(mass))


def dirac_plane_wave(k: Sequence[int], amplitude: np.ndarray, capacity: int) -> FourierField:
    return FourierField.plane_wave(tuple(int(x) for x in k), amplitude, capacity)


def majorana_plane_wave(W: ModuleDescriptor, k: Sequence[int], amplitude: np.ndarray,
                        capacity: int) -> FourierField:
    """nu = e^{ikx} u + e^{-ikx} X conj(u), so that nu^cc = nu"""
    k = tuple(int(x) for x in k)
    minus = tuple(-x for x in k)
    return FourierField.from_modes({k: amplitude, minus: W.conj @ np.conj(amplitude)}, len(k), capacity)


def dym_mode_system(dym: DYMOperator, k: Sequence[int]) -> np.ndarray:
    """
    Matrix of the DYM equation on chi = e^{ikx} u + e^{-ikx} w, acting on (u, X conj(w)).

    The first block row is the e^{ikx} mode of i slash(d_A) chi - phi chi - m chi^cc,
    the second is X conj of its e^{-ikx} mode, which makes the system complex linear.

    Raises:
        ValueError: if the connection or the charged mass depends on x
    """
    stm = dym.stm
    W = stm.W
    n = W.sig.n
    if dym.masses.phi_e.degree > 0 or any(a.degree > 0 for a in dym.potential_W.as_list()):
        raise ValueError("plane-wave modes need a constant connection and constant masses")
    conn = ConnectionSpec(W, dym.potential_W)
    capacity = max(1, dym.masses.phi_e.capacity)
    k = tuple(int(x) for x in k)
    minus = tuple(-x for x in k)

    def derivative(q):
        columns = [(1j * slash_derivative(conn, FourierField.plane_wave(q, e, capacity))).mode(q)
                   for e in np.eye(W.dim, dtype=complex)]
        return np.stack(columns, axis=1)

    phi = stm.twist_lift(dym.masses.dirac_twist()).mode((0,) * n)
    m = stm.twist_lift(dym.masses.majorana_twist()).astype(complex)
    X = W.conj
    X_inv = np.linalg.inv(X)

    def cc(B):
        return X @ np.conj(B) @ X_inv

    top = np.hstack([derivative(k) - phi, -m])
    bottom = np.hstack([-cc(m) @ X @ np.conj(X), cc(derivative(minus) - phi)])
    return np.vstack([top, bottom])


def dym_plane_wave_amplitudes(dym: DYMOperator, k: Sequence[int], rcond: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the (u, X conj(w)) solving the DYM equation on e^{ikx} u + e^{-ikx} w"""
    return scipy.linalg.null_space(dym_mode_system(dym, k), rcond=rcond)


def dym_plane_wave(W: ModuleDescriptor, k: Sequence[int], amplitude: np.ndarray, capacity: int) -> FourierField:
    """e^{ikx} u + e^{-ikx} w from a stacked amplitude (u, X conj(w))"""
    k = tuple(int(x) for x in k)
    minus = tuple(-x for x in k)
    u, v = amplitude[:W.dim], amplitude[W.dim:]
    w = np.conj(np.linalg.solve(W.conj, v))
    return FourierField.from_modes({k: u, minus: w}, len(k), capacity)


def on_shell_scale(massless: np.ndarray, massive: np.ndarray, atol: float = 1e-8) -> Optional[float]:
    """
    Smallest real s != 0 such that massless + s (massive - massless) is singular.

    Both arguments are mode systems of the same momentum; None when no real scaling exists.
    """
    alpha, beta = scipy.linalg.eigvals(massless, massless - massive, homogeneous_eigvals=True)
    finite = np.abs(beta) > 1e-10 * np.abs(alpha)
    scales = alpha[finite] / beta[finite]
    real = [float(s.real) for s in scales
            if abs(s.imag) <= atol * max(1.0, abs(s)) and abs(s) > atol]
    if not real:
        return None
    return min(real, key=abs)


def klein_gordon_residual(op: DiracOperatorSpec, mass: float, psi: FourierField) -> float:
    """||D^2 psi - (slash(d)^2 + m^2) psi|| relative"""
    twice = apply(op, apply(op, psi))
    flat = ConnectionSpec.flat(op.module, op.capacity)
    slash_sq = slash_derivative(flat, slash_derivative(flat, psi))
    expected = slash_sq + (mass ** 2) * psi
    return (twice - expected).l2_norm() / _scale(twice.l2_norm())


def plane_wave_dispersion(sig: Signature, k: Sequence[int], mass: float) -> float:
    """-epsilon sum_j eta_j k_j^2 + m^2"""
    k = np.asarray(k, dtype=float)
    return float(-sig.epsilon * np.sum(sig.eta * k ** 2) + mass ** 2)


def fermionic_action(D: DiracOperatorSpec, psi: FourierField) -> complex:
    """<<psi, D psi>> with the module's Hermitian form"""
    return l2_pairing(psi, apply(D, psi), D.module.form)
