"""
Z2-bi-graded real Clifford module fibers.

A module is a fiber C^d with Clifford generators gamma^k, a grading tau, a real
structure J z = X conj(z), a Hermitian form G and the measured sign flags of
the axioms relating them. Constructions: twisted Grassmann modules, doublings,
Dirac modules, real forms and the two-sector neutrino/charged module.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple
import logging

import numpy as np

from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.fourier_fields import FourierField
from dirac_verify.models import Signature, TwistDims, RealBranch

logger = logging.getLogger(__name__)

TAU2 = np.array([[1, 0], [0, -1]], dtype=complex)
EPS2 = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.array([[0, -1], [1, 0]], dtype=complex)
ONE2 = np.eye(2, dtype=complex)

AXIOM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ModuleFlags:
    """Measured signs of the module axioms"""
    s_tau_gamma: int
    s_J_gamma: Optional[int] = None
    s_J_tau: Optional[int] = None
    s_form: Optional[int] = None
    j_squared: Optional[int] = None


@dataclass(frozen=True)
class TwistData:
    """Twist fiber C^w with grading and conjugation matrix (J acts as v -> C conj(v))"""
    w: int
    tau: Optional[np.ndarray] = None
    conj: Optional[np.ndarray] = None

    def tau_matrix(self) -> np.ndarray:
        return np.eye(self.w, dtype=complex) if self.tau is None else np.asarray(self.tau, dtype=complex)

    def conj_matrix(self) -> np.ndarray:
        return np.eye(self.w, dtype=complex) if self.conj is None else np.asarray(self.conj, dtype=complex)


@dataclass(frozen=True, eq=False)
class ModuleDescriptor:
    """
    Clifford module fiber with grading, real structure and Hermitian form.

    chirality is the lift of tau_M; op_gammas the opposite Clifford action when
    the module is a bi-module; inner an optional second grading.
    """
    sig: Signature
    kind: str
    gammas: np.ndarray
    tau: np.ndarray
    form: np.ndarray
    chirality: np.ndarray
    flags: ModuleFlags
    conj: Optional[np.ndarray] = None
    op_gammas: Optional[np.ndarray] = None
    inner: Optional[np.ndarray] = None
    twist_dim: int = 1
    multiplicity: int = 1
    blocks: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.gammas.shape[-1]

    @property
    def is_real(self) -> bool:
        return self.conj is not None

    @property
    def is_majorana(self) -> bool:
        """Real structure anticommutes with the chirality"""
        return self.is_real and _measure_sign(self.conjugate_endo(self.chirality), self.chirality) == -1

    def theta(self) -> Dict[cf.Blade, np.ndarray]:
        return cf.theta_components(self.sig, self.gammas)

    def gamma_of(self, alpha) -> np.ndarray:
        return np.tensordot(np.asarray(alpha, dtype=complex), self.gammas, axes=1)

    def _require_real(self):
        if self.conj is None:
            raise ValueError(f"{self.kind} module has no real structure")

    def conjugate_endo(self, B):
        """B^cc = J B J, as X conj(B) conj(X) pointwise (matrix or field)"""
        self._require_real()
        X = self.conj
        if isinstance(B, FourierField):
            return X @ B.conjugate() @ np.conj(X)
        return X @ np.conj(B) @ np.conj(X)

    def conjugate_section(self, psi):
        """J psi = X conj(psi) pointwise"""
        self._require_real()
        if isinstance(psi, FourierField):
            return self.conj @ psi.conjugate()
        return self.conj @ np.conj(psi)

    def describe(self) -> dict:
        """JSON-ready description: dims, flags and matrices as [re, im] pairs"""
        return {
            "kind": self.kind,
            "signature": {"p": self.sig.p, "q": self.sig.q, "epsilon": self.sig.epsilon},
            "dim": self.dim,
            "twist_dim": self.twist_dim,
            "multiplicity": self.multiplicity,
            "flags": {k: v for k, v in self.flags.__dict__.items() if v is not None},
            "tau": matrix_to_pairs(self.tau),
            "conj": None if self.conj is None else matrix_to_pairs(self.conj),
            "form": matrix_to_pairs(self.form),
            "bi_module": self.op_gammas is not None,
        }


def matrix_to_pairs(matrix: np.ndarray) -> list:
    matrix = np.asarray(matrix)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _measure_sign(lhs: np.ndarray, rhs: np.ndarray, atol: float = AXIOM_TOLERANCE) -> Optional[int]:
    """s in {+1, -1} with lhs = s rhs, or None"""
    scale = max(1.0, float(np.max(np.abs(rhs))))
    for s in (1, -1):
        if np.max(np.abs(lhs - s * rhs)) <= atol * scale:
            return s
    return None


def _uniform_sign(pairs, name: str) -> int:
    signs = {_measure_sign(lhs, rhs) for lhs, rhs in pairs}
    if len(signs) != 1 or None in signs:
        raise ValueError(f"axiom '{name}' does not hold with a single sign (measured {signs})")
    return signs.pop()


def measure_flags(sig: Signature, gammas: np.ndarray, tau: np.ndarray,
                  conj: Optional[np.ndarray], form: np.ndarray) -> ModuleFlags:
    """
    Verify every module axiom and record its sign.

    Raises:
        ValueError: if an axiom fails for both signs
    """
    if np.max(np.abs(tau @ tau - np.eye(tau.shape[0]))) > AXIOM_TOLERANCE:
        raise ValueError("grading is not an involution")
    for a in range(sig.n):
        for b in range(sig.n):
            expected = 2 * sig.epsilon * sig.eta[a] * (a == b) * np.eye(gammas.shape[-1])
            if np.max(np.abs(cf.anticommutator(gammas[a], gammas[b]) - expected)) > AXIOM_TOLERANCE:
                raise ValueError(f"Clifford relation fails for generators {a}, {b}")
    s_tau_gamma = _uniform_sign(((tau @ g, g @ tau) for g in gammas), "tau gamma")
    if conj is None:
        return ModuleFlags(s_tau_gamma=s_tau_gamma)
    X = conj
    Xbar = np.conj(X)
    j_squared = _measure_sign(X @ Xbar, np.eye(X.shape[0], dtype=complex))
    if j_squared is None:
        raise ValueError("real structure does not square to +-1")
    s_J_gamma = _uniform_sign(((X @ np.conj(g) @ Xbar, g) for g in gammas), "J gamma")
    s_J_tau = _uniform_sign([(X @ np.conj(tau) @ Xbar, tau)], "J tau")
    s_form = _uniform_sign([(X.conj().T @ form @ X, form.T)], "form")
    return ModuleFlags(s_tau_gamma, s_J_gamma, s_J_tau, s_form, j_squared)


def grassmann_conjugation(sig: Signature, branch: RealBranch) -> np.ndarray:
    """X on the Grassmann fiber: identity (gamma^cc = +gamma) or grade involution (gamma^cc = -gamma)"""
    if branch == RealBranch.PLUS:
        return np.eye(2 ** sig.n, dtype=complex)
    return cf.grade_involution(sig.n)


def build_twisted_module(sig: Signature, twist: TwistData,
                         branch: RealBranch = RealBranch.MINUS) -> ModuleDescriptor:
    """
    Twisted Grassmann module Lambda (x) C^w with gamma (x) id and tau_M (x) tau_E.

    Args:
        sig: metric signature
        twist: twist dimension, grading and conjugation matrix
        branch: sign of gamma^cc on the Grassmann factor

    Returns:
        ModuleDescriptor with measured flags
    """
    if twist.w < 1:
        raise ValueError(f"twist dimension must be >= 1, got {twist.w}")
    eye_w = np.eye(twist.w, dtype=complex)
    tau_m = cf.chirality(sig)
    gammas = np.array([np.kron(g, eye_w) for g in cf.gamma_matrices(sig)])
    op_gammas = np.array([np.kron(g, eye_w) for g in cf.opposite_gammas(sig)])
    tau = np.kron(tau_m, twist.tau_matrix())
    conj = np.kron(grassmann_conjugation(sig, branch), twist.conj_matrix())
    form = np.eye(gammas.shape[-1], dtype=complex)
    flags = measure_flags(sig, gammas, tau, conj, form)
    logger.debug("twisted module %s w=%d flags=%s", sig.label, twist.w, flags)
    return ModuleDescriptor(
        sig=sig, kind="twisted", gammas=gammas, tau=tau, form=form,
        chirality=np.kron(tau_m, eye_w), flags=flags, conj=conj,
        op_gammas=op_gammas, twist_dim=twist.w,
    )


def _kron_blocks(blocks: Dict[str, np.ndarray], matrix: np.ndarray) -> Dict[str, np.ndarray]:
    return {name: np.kron(matrix, p) for name, p in blocks.items()}


def _kron_stack(stack: Optional[np.ndarray], matrix: np.ndarray) -> Optional[np.ndarray]:
    return None if stack is None else np.array([np.kron(matrix, g) for g in stack])


def double(m: ModuleDescriptor) -> ModuleDescriptor:
    """Doubling P = 2E: tau (x) tau2, gamma (x) 1, J (x) eps2, form/2 (x) 1"""
    if m.conj is None:
        raise ValueError("doubling needs a real structure")
    gammas = _kron_stack(m.gammas, ONE2)
    tau = np.kron(TAU2, m.tau)
    conj = np.kron(EPS2, m.conj)
    form = 0.5 * np.kron(ONE2, m.form)
    flags = measure_flags(m.sig, gammas, tau, conj, form)
    return ModuleDescriptor(
        sig=m.sig, kind="double", gammas=gammas, tau=tau, form=form,
        chirality=np.kron(ONE2, m.chirality), flags=flags, conj=conj,
        op_gammas=_kron_stack(m.op_gammas, ONE2),
        inner=None if m.inner is None else np.kron(ONE2, m.inner),
        twist_dim=m.twist_dim, multiplicity=2 * m.multiplicity,
        blocks=_kron_blocks(m.blocks, ONE2),
    )


def build_dirac_module(w: ModuleDescriptor) -> ModuleDescriptor:
    """
    Dirac module S = 2W over a Majorana module W.

    tau_S = id (x) tau2, gamma_S = gamma_W (x) eps2, J_S = J_W (x) eps2 and the
    pairing <u1, v2> + <v1, u2>.
    """
    if not w.is_majorana:
        raise ValueError("Dirac modules are built over Majorana modules (J must anticommute with tau_M)")
    gammas = _kron_stack(w.gammas, EPS2)
    tau = np.kron(TAU2, np.eye(w.dim, dtype=complex))
    conj = np.kron(EPS2, w.conj)
    form = np.kron(EPS2, w.form)
    flags = measure_flags(w.sig, gammas, tau, conj, form)
    return ModuleDescriptor(
        sig=w.sig, kind="dirac", gammas=gammas, tau=tau, form=form,
        chirality=np.kron(ONE2, w.chirality), flags=flags, conj=conj,
        op_gammas=_kron_stack(w.op_gammas, EPS2),
        inner=None if w.inner is None else np.kron(ONE2, w.inner),
        twist_dim=w.twist_dim, multiplicity=2 * w.multiplicity,
        blocks=_kron_blocks(w.blocks, ONE2),
    )


def conjugate_endo(m: ModuleDescriptor, B):
    return m.conjugate_endo(B)


def real_form_endo(m: ModuleDescriptor, B):
    """diag(B, B^cc) on 2S"""
    if isinstance(B, FourierField):
        d = m.dim
        return FourierField.block([[B, None], [None, m.conjugate_endo(B)]], B.n, B.capacity, (d, d))
    return _block_diag(B, m.conjugate_endo(B))


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d1, d2 = a.shape[0], b.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    out[:d1, :d1] = a
    out[d1:, d1:] = b
    return out


def build_real_form_module(s: ModuleDescriptor) -> ModuleDescriptor:
    """E = 2S with gamma_E = diag(gamma, gamma^cc), tau_E = diag(tau, tau^cc), J_E = J_S (x) eps2"""
    s._require_real()
    gammas = np.array([_block_diag(g, s.conjugate_endo(g)) for g in s.gammas])
    tau = _block_diag(s.tau, s.conjugate_endo(s.tau))
    conj = np.kron(EPS2, s.conj)
    form = 0.5 * np.kron(ONE2, s.form)
    flags = measure_flags(s.sig, gammas, tau, conj, form)
    op_gammas = None
    if s.op_gammas is not None:
        op_gammas = np.array([_block_diag(g, s.conjugate_endo(g)) for g in s.op_gammas])
    return ModuleDescriptor(
        sig=s.sig, kind="real_form", gammas=gammas, tau=tau, form=form,
        chirality=_block_diag(s.chirality, s.conjugate_endo(s.chirality)), flags=flags, conj=conj,
        op_gammas=op_gammas,
        inner=None if s.inner is None else _block_diag(s.inner, s.conjugate_endo(s.inner)),
        twist_dim=s.twist_dim, multiplicity=2 * s.multiplicity,
        blocks={name: _block_diag(p, s.conjugate_endo(p)) for name, p in s.blocks.items()},
    )


def diagonal_embed(psi):
    """psi -> (psi, psi)"""
    if isinstance(psi, FourierField):
        return FourierField.stack([psi, psi])
    psi = np.asarray(psi)
    return np.concatenate([psi, psi])


def pauli_membership(big_psi, atol: float = 1e-12) -> bool:
    """Whether a doubled vector has the form (z, z)"""
    if isinstance(big_psi, FourierField):
        d = big_psi.value_shape[0] // 2
        return (big_psi.segment(slice(0, d)) - big_psi.segment(slice(d, 2 * d))).max_abs() <= atol
    big_psi = np.asarray(big_psi)
    d = big_psi.shape[0] // 2
    return bool(np.max(np.abs(big_psi[:d] - big_psi[d:]), initial=0.0) <= atol)


def yukawa_mapping(g_q_prime: np.ndarray, g_q: np.ndarray, g_l: np.ndarray, higgs) -> np.ndarray:
    """
    phi_e,LR: E_R -> E_L from Yukawa couplings and a Higgs doublet.

    Rows: quark doublets (2N), lepton doublets (2N). Columns: down quarks (N),
    up quarks (N), charged leptons (N).
    """
    higgs = np.asarray(higgs, dtype=complex).reshape(2, 1)
    higgs_cc = I2 @ np.conj(higgs)
    N = np.asarray(g_l).shape[0]
    for name, g in (("g_q_prime", g_q_prime), ("g_q", g_q), ("g_l", g_l)):
        if np.asarray(g).shape != (N, N):
            raise ValueError(f"Yukawa matrix {name} must be {N}x{N}, got {np.asarray(g).shape}")
    quark_row = np.hstack([np.kron(g_q_prime, higgs), -np.kron(g_q, higgs_cc)])
    lepton = np.kron(g_l, higgs)
    out = np.zeros((4 * N, 3 * N), dtype=complex)
    out[: 2 * N, : 2 * N] = quark_row
    out[2 * N:, 2 * N:] = lepton
    return out


@dataclass(frozen=True, eq=False)
class MassBlockSpec:
    """
    Mass data on the twist V + E: constant real neutrino blocks and a charged Yukawa field.

    m_majorana lives on the neutrino block only; phi_e is an e x e matrix field.
    """
    m_dirac_nu: np.ndarray
    m_majorana_nu: np.ndarray
    phi_e: FourierField

    def __post_init__(self):
        for name, m in (("m_dirac_nu", self.m_dirac_nu), ("m_majorana_nu", self.m_majorana_nu)):
            m = np.asarray(m)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
            if np.max(np.abs(np.imag(m)), initial=0.0) > 0:
                raise ValueError(f"{name} must be real")
        if np.asarray(self.m_dirac_nu).shape != np.asarray(self.m_majorana_nu).shape:
            raise ValueError("neutrino mass blocks must have equal dimensions")

    @property
    def v(self) -> int:
        return np.asarray(self.m_dirac_nu).shape[0]

    @property
    def e(self) -> int:
        return self.phi_e.value_shape[0]

    def dirac_twist(self) -> FourierField:
        """diag(m_D, phi_e) as a field on the twist"""
        v, e = self.v, self.e
        m_d = FourierField.constant(self.m_dirac_nu, self.phi_e.n, self.phi_e.capacity)
        return FourierField.block([[m_d, None], [None, self.phi_e]], self.phi_e.n, self.phi_e.capacity, (v, e))

    def majorana_twist(self) -> np.ndarray:
        """diag(m_M, 0) on the twist"""
        v, e = self.v, self.e
        out = np.zeros((v + e, v + e))
        out[:v, :v] = self.m_majorana_nu
        return out


@dataclass(frozen=True, eq=False)
class STMModule:
    """Majorana module W = W_nu + W_e with its Dirac module S, real form E and doubling P"""
    W: ModuleDescriptor
    S: ModuleDescriptor
    E: ModuleDescriptor
    dims: TwistDims
    yukawa: Optional[np.ndarray] = None

    def twist_lift(self, t):
        """id_Lambda (x) t on W for a twist matrix or twist field"""
        eye = np.eye(2 ** self.W.sig.n, dtype=complex)
        if isinstance(t, FourierField):
            return t.kron_left(eye)
        return np.kron(eye, t)

    def projector(self, chirality: int, inner: int, block: str) -> np.ndarray:
        """Projector onto {tau_M = chirality, inner = inner} within a twist block of W"""
        d = self.W.dim
        p_chi = 0.5 * (np.eye(d) + chirality * self.W.chirality)
        p_inner = 0.5 * (np.eye(d) + inner * self.W.inner)
        return p_chi @ p_inner @ self.W.blocks[block]


def build_stm_module(sig: Signature, dims: TwistDims, yukawa: Optional[dict] = None) -> STMModule:
    """
    Two-sector Majorana module Lambda (x) (V + E) with chirality x inner bi-grading.

    Args:
        sig: signature admitting Majorana modules
        dims: twist block dimensions
        yukawa: optional {"g_q_prime", "g_q", "g_l", "higgs"} for the charged Yukawa block

    Returns:
        STMModule with W, its Dirac module S and real form E
    """
    if not sig.admits_majorana:
        raise ValueError(f"signature {sig.label} admits no Majorana module")
    v, e = dims.v, dims.e
    inner_twist = np.diag([1.0] * dims.v_r + [-1.0] * dims.v_l + [1.0] * dims.e_r + [-1.0] * dims.e_l)
    twist = TwistData(w=v + e, tau=inner_twist)
    W = build_twisted_module(sig, twist, RealBranch.MINUS)
    eye = np.eye(2 ** sig.n, dtype=complex)
    nu_block = np.diag([1.0] * v + [0.0] * e)
    e_block = np.diag([0.0] * v + [1.0] * e)
    W = replace(
        W, kind="stm", inner=np.kron(eye, inner_twist).astype(complex),
        blocks={"nu": np.kron(eye, nu_block).astype(complex), "e": np.kron(eye, e_block).astype(complex)},
    )
    phi_lr = None
    if yukawa is not None:
        phi_lr = yukawa_mapping(yukawa["g_q_prime"], yukawa["g_q"], yukawa["g_l"], yukawa["higgs"])
        if phi_lr.shape != (dims.e_l, dims.e_r):
            raise ValueError(
                f"Yukawa block {phi_lr.shape} is inconsistent with dims e_l={dims.e_l}, e_r={dims.e_r}"
            )
    S = build_dirac_module(W)
    E = build_real_form_module(S)
    return STMModule(W=W, S=S, E=E, dims=dims, yukawa=phi_lr)


def charged_yukawa_endo(dims: TwistDims, phi_lr: np.ndarray) -> np.ndarray:
    """phi_e = [[0, phi_RL], [phi_LR, 0]] on E_R + E_L with phi_RL = phi_LR^dagger"""
    out = np.zeros((dims.e, dims.e), dtype=complex)
    out[: dims.e_r, dims.e_r:] = phi_lr.conj().T
    out[dims.e_r:, : dims.e_r] = phi_lr
    return out
