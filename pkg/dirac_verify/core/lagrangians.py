"""
Action-level identities assembled by two independent routes.

All integrals are over the flat torus, computed from Fourier coefficients with
trace_pairing where possible so no extra products are formed.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.dirac_ops import (
    ConnectionSpec,
    DYMOperator,
    DiracOperatorSpec,
    apply,
    bochner,
    curvature,
    dirac_connection,
    dym_op,
    lift_to_dirac,
    lift_to_real_form,
    potential_V_D,
    slash_derivative,
    simple_type_residual,
)
from dirac_verify.core.fourier_fields import (
    FourierField,
    FormField,
    covariant_exterior,
    ev_g,
    l2_pairing,
    product,
    trace_pairing,
    wedge,
)
from dirac_verify.core.graded_modules import I2, ONE2, MassBlockSpec, build_stm_module
from dirac_verify.core.pauli_maps import pi_map, relative_curvature
from dirac_verify.models import LagrangianReport, CosmologicalConstant, Signature, TwistDims

logger = logging.getLogger(__name__)

TERM_NAMES = ("yang_mills", "higgs_kinetic", "quartic", "quadratic")


# ----- exact coefficients ----------------------------------------------------

def lambda_coefficient(n: int) -> Fraction:
    """a = 2 (n-1)^3 / n^2"""
    return Fraction(2 * (n - 1) ** 3, n ** 2)


def stm_display_coefficients(n: int, epsilon: int) -> Dict[str, Fraction]:
    """
    Coefficients as displayed: (n-3) tr F^2 - k tr (dmu)^2 - q tr mu^4 - 2 tr mu^2
    """
    c = Fraction(n - 1, n)
    return {
        "yang_mills": Fraction(n - 3),
        "higgs_kinetic": 2 * epsilon * (n - 2) * c ** 2,
        "quartic": lambda_coefficient(n),
        "quadratic": Fraction(2),
    }


def stm_weights(n: int, epsilon: int) -> Dict[str, Fraction]:
    """Signed weights of the closed-form right-hand side"""
    display = stm_display_coefficients(n, epsilon)
    return {name: value if name == "yang_mills" else -value for name, value in display.items()}


def pi_weights(n: int, epsilon: int) -> Dict[str, Fraction]:
    """-tr F^2 + 2 epsilon c^2 tr (dmu)^2 + 2 c^2 tr mu^4 - 2 tr mu^2 with c = (n-1)/n"""
    c = Fraction(n - 1, n)
    return {
        "yang_mills": Fraction(-1),
        "higgs_kinetic": 2 * epsilon * c ** 2,
        "quartic": 2 * c ** 2,
        "quadratic": Fraction(-2),
    }


def coefficient_rows(n_max: int, epsilon: int = 1) -> List[Dict[str, str]]:
    """Exact coefficient table for even n = 2..n_max"""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    rows = []
    for n in range(2, n_max + 1, 2):
        row = {"n": str(n), "epsilon": str(epsilon), "a": str(lambda_coefficient(n))}
        row.update({f"stm_{k}": str(v) for k, v in stm_display_coefficients(n, epsilon).items()})
        row.update({f"pi_{k}": str(v) for k, v in pi_weights(n, epsilon).items()})
        rows.append(row)
    return rows


def _fraction_str(weights: Dict[str, Fraction]) -> Dict[str, str]:
    return {k: str(v) for k, v in weights.items()}


def _relative(a: complex, b: complex, *scales: float) -> float:
    return abs(a - b) / max([1.0, abs(a), abs(b)] + [abs(s) for s in scales])


# ----- universal Lagrangian ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class UniversalLagrangian:
    """Pointwise Lagrangian tr_gamma(curv(d_D) - epsilon ev_g(omega^2)) and its integrals"""
    density: FourierField
    integral: complex
    trace_potential_integral: complex
    pointwise_residual: float
    xi_max: float


def universal_lagrangian(D: DiracOperatorSpec) -> UniversalLagrangian:
    data = bochner(D)
    identity = potential_V_D(D, data)
    density = identity.lagrangian
    return UniversalLagrangian(
        density=density,
        integral=density.integrate(),
        trace_potential_integral=identity.trace_potential.integrate(),
        pointwise_residual=identity.residual,
        xi_max=max(x.max_abs() for x in data.xi),
    )


@dataclass(frozen=True)
class TranslationResult:
    before: complex
    after: complex
    residual: float
    pointwise_residual: float


def translation_invariance(D: DiracOperatorSpec, alpha: FormField) -> TranslationResult:
    """
    Compare the universal action of D and D + slash(alpha).

    Raises:
        ValueError: if alpha does not commute with gamma
    """
    for k, component in enumerate(alpha.as_list()):
        defect = max(cf.commutator(g, component).max_abs() for g in D.gammas)
        if defect > settings.pointwise_tolerance * max(1.0, component.max_abs()):
            raise ValueError(f"translation component {k} does not commute with gamma ({defect:.3e})")
    shifted = DiracOperatorSpec(D.conn.shifted(alpha), D.phi)
    before = universal_lagrangian(D)
    after = universal_lagrangian(shifted)
    pointwise = (after.density - before.density).max_abs() / max(1.0, before.density.max_abs())
    return TranslationResult(
        before=before.integral,
        after=after.integral,
        residual=_relative(before.integral, after.integral),
        pointwise_residual=pointwise,
    )


# ----- Einstein-Hilbert and Yang-Mills-Higgs ---------------------------------

@dataclass(frozen=True)
class EHResult:
    trace_curvature_max: float
    scalar_curvature_term: float

    @property
    def residual(self) -> float:
        return max(self.trace_curvature_max, abs(self.scalar_curvature_term))


def scalar_curvature(metric: FourierField) -> float:
    """
    Scalar curvature of the Levi-Civita connection of a constant metric field.

    Christoffel symbols and their derivatives come from the spectral derivatives of g.

    Raises:
        ValueError: for a metric depending on x
    """
    if metric.degree > 0:
        raise ValueError("scalar curvature needs a constant metric")
    n = metric.n
    origin = (0,) * n
    g_inv = np.linalg.inv(metric.mode(origin))
    dg = np.stack([metric.derive(c).mode(origin) for c in range(n)])
    ddg = np.stack([np.stack([metric.derive(c).derive(e).mode(origin) for c in range(n)]) for e in range(n)])
    # lowered[d, b, c] = d_b g_dc + d_c g_db - d_d g_bc
    lowered = np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg
    christoffel = 0.5 * np.einsum("ad,dbc->abc", g_inv, lowered)
    d_lowered = np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg) - ddg
    d_christoffel = 0.5 * np.einsum("ad,edbc->eabc", g_inv, d_lowered)
    riemann = (
        np.einsum("cadb->abcd", d_christoffel)
        - np.einsum("dacb->abcd", d_christoffel)
        + np.einsum("ace,edb->abcd", christoffel, christoffel)
        - np.einsum("ade,ecb->abcd", christoffel, christoffel)
    )
    ricci = np.einsum("abad->bd", riemann)
    return float(np.real(np.einsum("bd,bd->", g_inv, ricci)))


def eh_flat_identity(conn: ConnectionSpec) -> EHResult:
    """
    tr_gamma curv(slash d_A) = -(epsilon/4) scal 2^n w + tr delta_gamma(F_A); both vanish on the flat torus.

    Raises:
        ValueError: for a non-Clifford connection
    """
    if not conn.clifford_flag:
        raise ValueError(f"EH identity needs a Clifford connection (defect {conn.clifford_residual():.3e})")
    sig = conn.module.sig
    F = curvature(conn)
    trace = cf.quantize_form(conn.module.gammas, F.components).trace()
    metric = FourierField.constant(np.diag(sig.eta), sig.n, conn.capacity)
    scal_term = -(sig.epsilon / 4) * scalar_curvature(metric) * conn.module.dim
    return EHResult(trace_curvature_max=trace.max_abs(), scalar_curvature_term=scal_term)


def theta_form(module, n: int, capacity: int) -> FormField:
    """Canonical one-form Theta as a constant End-valued form"""
    theta = cf.theta_components(module.sig, module.gammas)
    return FormField.from_list([FourierField.constant(theta[(k,)], n, capacity) for k in range(n)])


@dataclass(frozen=True, eq=False)
class YMHCurvature:
    F_ymh: FormField
    H: FormField
    auxiliary_residual: float
    dirac_connection_residual: float


def ymh_curvature(conn: ConnectionSpec, phi_H: FourierField) -> YMHCurvature:
    """
    F_YMH = F_A + d_A H + H^H with H = Phi_H Theta.

    Also checks d_A H + H^H = (d_A Phi_H + Phi_H^2 Theta)^Theta and that the
    Dirac connection of slash(d_A) + Phi_H is d_A + H.
    """
    module = conn.module
    n = module.sig.n
    defect = max(cf.commutator(g, phi_H).max_abs() for g in module.gammas)
    if defect > settings.pointwise_tolerance * max(1.0, phi_H.max_abs()):
        raise ValueError(f"Higgs field does not commute with gamma ({defect:.3e})")
    capacity = min(conn.capacity, phi_H.capacity)
    theta = theta_form(module, n, capacity)
    H = theta.map(lambda t: phi_H @ t)
    dH = covariant_exterior(conn.potential, H)
    HH = wedge(H, H)
    F_ymh = curvature(conn) + dH + HH
    d_phi = covariant_exterior(conn.potential, FormField.scalar(phi_H))
    phi_sq = product(phi_H, phi_H)
    inner = FormField.from_list([d_phi[k] + phi_sq @ theta[k] for k in range(n)])
    auxiliary = wedge(inner, theta)
    aux_residual = (dH + HH - auxiliary).max_abs()
    D = DiracOperatorSpec(conn, phi_H)
    connection = dirac_connection(D).potential
    dirac_residual = (connection - (conn.potential + H)).max_abs()
    return YMHCurvature(F_ymh=F_ymh, H=H, auxiliary_residual=aux_residual,
                        dirac_connection_residual=dirac_residual)


def constant_mass_ymh_residual(module, mass: float, capacity: int) -> float:
    """F_YMH for Phi_H = i m, A = 0 against -m^2 Theta^Theta, blade by blade"""
    n = module.sig.n
    conn = ConnectionSpec.flat(module, capacity)
    phi = FourierField.constant(1j * mass * np.eye(module.dim), n, capacity)
    result = ymh_curvature(conn, phi)
    theta = theta_form(module, n, capacity)
    expected = wedge(theta, theta) * (-mass ** 2)
    return (result.F_ymh - expected).max_abs()


@dataclass(frozen=True)
class HiggsLambda:
    lambda_H: complex
    trace_phi_sq: complex
    ratio: float
    expected: Fraction


def higgs_lambda(module, phi_H: FourierField) -> HiggsLambda:
    """tr_g H^2 against tr Phi_H^2; the ratio depends on the dimension only"""
    sig = module.sig
    theta = cf.theta_components(sig, module.gammas)
    lam = 0j
    for k in range(sig.n):
        H_k = phi_H @ theta[(k,)]
        lam += float(sig.eta[k]) * trace_pairing(H_k, H_k)
    trace = trace_pairing(phi_H, phi_H)
    ratio = float(np.real(lam / trace)) if abs(trace) > 0 else 0.0
    return HiggsLambda(lambda_H=lam, trace_phi_sq=trace, ratio=ratio, expected=Fraction(sig.epsilon, sig.n))


# ----- DYM trace identities ----------------------------------------------------

def _form_square(sig: Signature, F: FormField) -> complex:
    """sum_{i,j} eta_i eta_j int tr(F_ij F_ij)"""
    total = 0j
    for (i, j), component in F.components.items():
        total += 2.0 * float(sig.eta[i] * sig.eta[j]) * trace_pairing(component, component)
    return total


def _kinetic_square(conn: ConnectionSpec, X: FourierField) -> complex:
    """sum_k eta_k int tr((nabla_k X)^2)"""
    sig = conn.module.sig
    total = 0j
    for k in range(sig.n):
        dX = conn.covariant_endo(X, k)
        total += float(sig.eta[k]) * trace_pairing(dX, dX)
    return total


def dym_terms(dym: DYMOperator) -> Dict[str, complex]:
    """Integrated yang_mills, higgs_kinetic, quartic, quadratic and einstein_hilbert terms"""
    op = dym.op
    sig = op.sig
    mu = dym.mu
    F = curvature(op.conn)
    mu_sq = product(mu, mu)
    return {
        "yang_mills": _form_square(sig, F),
        "higgs_kinetic": _kinetic_square(op.conn, mu),
        "quartic": trace_pairing(mu_sq, mu_sq),
        "quadratic": trace_pairing(mu, mu),
        "einstein_hilbert": cf.quantize_form(op.gammas, F.components).trace().integrate(),
    }


def _weighted(terms: Dict[str, complex], weights: Dict[str, Fraction]) -> complex:
    return sum(float(weights[name]) * terms[name] for name in TERM_NAMES)


def stm_lhs(dym: DYMOperator) -> complex:
    """
    -tr_P Phi^2 + (epsilon/4) sum_i eta_i tr_P({gamma^i, Phi}^2) for
    Phi = mu (x) 1 + slashF (x) I2 on P, slashF from the Dirac connection
    """
    op = dym.op
    sig = op.sig
    slash_F = relative_curvature(op).slash
    phi = dym.mu.kron_left(ONE2) + slash_F.kron_left(I2)
    total = -trace_pairing(phi, phi)
    for i, g in enumerate(op.gammas):
        lifted = np.kron(ONE2, g)
        bracket = cf.anticommutator(lifted, phi)
        total += 0.25 * sig.epsilon * float(sig.eta[i]) * trace_pairing(bracket, bracket)
    return total


def stm_terms(dym: DYMOperator) -> Dict[str, complex]:
    terms = dym_terms(dym)
    terms["lhs"] = stm_lhs(dym)
    return terms


def stm_identity(dym: DYMOperator) -> LagrangianReport:
    """Operator-level trace against the closed form, with the component identities"""
    op = dym.op
    sig = op.sig
    n, eps = sig.n, sig.epsilon
    c = (n - 1) / n
    terms = stm_terms(dym)
    weights = stm_weights(n, eps)
    rhs = _weighted(terms, weights)
    scale = max(abs(terms[name]) * abs(float(weights[name])) for name in TERM_NAMES)

    mu = dym.mu
    anticommutator_term = 0j
    for i, g in enumerate(op.gammas):
        bracket = cf.anticommutator(g, mu)
        anticommutator_term += float(sig.eta[i]) * trace_pairing(bracket, bracket)
    slash_F = relative_curvature(op).slash
    slash_sq = trace_pairing(slash_F, slash_F)
    slash_expected = -0.5 * terms["yang_mills"] + c ** 2 * terms["quartic"] + eps * c ** 2 * terms["higgs_kinetic"]

    conn_W = ConnectionSpec(dym.stm.W, dym.potential_W)
    phi_W = dym.stm.twist_lift(dym.masses.dirac_twist())
    ym_W = _form_square(sig, curvature(conn_W))
    kin_W = _kinetic_square(conn_W, phi_W)

    residuals = {
        "routes": _relative(terms["lhs"], rhs, scale),
        "anticommutator_trace": abs(anticommutator_term) / max(1.0, scale),
        "slash_f_square": _relative(slash_sq, slash_expected, scale),
        "yang_mills_component": _relative(terms["yang_mills"], 4.0 * ym_W.real),
        "kinetic_component": _relative(terms["higgs_kinetic"], -4.0 * kin_W.real),
    }
    report = LagrangianReport(
        n=n,
        epsilon=eps,
        terms={name: float(np.real(value)) for name, value in terms.items()},
        coefficients=_fraction_str(weights),
        residuals=residuals,
        flags={"identity": "stm", "lhs_imag": f"{np.imag(terms['lhs']):.3e}"},
    )
    logger.info("stm identity n=%d eps=%d routes residual %.3e", n, eps, residuals["routes"])
    return report


def pi_terms(dym: DYMOperator) -> Tuple[Dict[str, complex], "object"]:
    terms = dym_terms(dym)
    pauli = pi_map(dym.op)
    phi = pauli.op.phi
    terms["trace_phi_sq"] = trace_pairing(phi, phi)
    return terms, pauli


def pi_identity(dym: DYMOperator) -> LagrangianReport:
    """
    Closed form of tr_P Phi^2 for the pi-map image and, when the image is of
    simple type, the omega contraction and the action identity.
    """
    op = dym.op
    sig = op.sig
    n, eps = sig.n, sig.epsilon
    terms, pauli = pi_terms(dym)
    weights = pi_weights(n, eps)
    closed = _weighted(terms, weights)
    scale = max(abs(terms[name]) * abs(float(weights[name])) for name in TERM_NAMES)
    residuals = {"closed_form": _relative(terms["trace_phi_sq"], closed, scale)}
    flags = {"identity": "pi"}

    image = pauli.op
    data = bochner(image)
    simple = simple_type_residual(image, data) <= settings.pointwise_tolerance * max(1.0, image.phi.max_abs())
    flags["simple_type_image"] = str(simple).lower()
    if simple:
        omega_sq = ev_g(sig, data.omega)
        expected = product(data.phi_D, data.phi_D) * (-eps / n)
        residuals["omega_contraction"] = (omega_sq - expected).max_abs() / max(1.0, expected.max_abs())
        residuals["xi"] = max(x.max_abs() for x in data.xi)
        action = universal_lagrangian(image).integral
        eh = cf.quantize_form(image.gammas, curvature(image.conn).components).trace().integrate()
        terms["action"] = action
        terms["einstein_hilbert_P"] = eh
        residuals["action"] = _relative(action, eh + terms["trace_phi_sq"], scale)
    report = LagrangianReport(
        n=n,
        epsilon=eps,
        terms={name: float(np.real(value)) for name, value in terms.items()},
        coefficients=_fraction_str(weights),
        residuals=residuals,
        flags=flags,
    )
    logger.info("pi identity n=%d eps=%d closed-form residual %.3e", n, eps, residuals["closed_form"])
    return report


@dataclass(frozen=True)
class CoefficientFit:
    fitted: Dict[str, float]
    expected: Dict[str, Fraction]
    max_error: float
    fit_residual: float


def refit_coefficients(samples: Sequence[Dict[str, complex]], target: str,
                       expected: Dict[str, Fraction]) -> CoefficientFit:
    """
    Least-squares fit of target = sum_t w_t term_t over samples (real and
    imaginary parts stacked).

    Raises:
        ValueError: with fewer samples than unknowns
    """
    if len(samples) < len(TERM_NAMES):
        raise ValueError(f"need at least {len(TERM_NAMES)} samples to fit, got {len(samples)}")
    rows = np.array([[s[name] for name in TERM_NAMES] for s in samples], dtype=complex)
    rhs = np.array([s[target] for s in samples], dtype=complex)
    A = np.vstack([rows.real, rows.imag])
    b = np.concatenate([rhs.real, rhs.imag])
    scales = np.maximum(np.max(np.abs(A), axis=0), 1e-300)
    solution, *_ = np.linalg.lstsq(A / scales, b, rcond=None)
    solution = solution / scales
    fitted = {name: float(solution[i]) for i, name in enumerate(TERM_NAMES)}
    error = max(abs(fitted[name] - float(expected[name])) for name in TERM_NAMES)
    fit_residual = float(np.linalg.norm(A @ solution - b) / max(1.0, np.linalg.norm(b)))
    return CoefficientFit(fitted=fitted, expected=expected, max_error=error, fit_residual=fit_residual)


# ----- cosmological constant ----------------------------------------------------

def majorana_signature(n: int) -> Signature:
    """A signature in dimension n that admits Majorana modules"""
    q = 0 if (n * (n - 1) // 2) % 2 == 1 else 1
    return Signature(p=n - q, q=q, epsilon=1)


def _validate_masses(m_dirac, m_majorana) -> Tuple[np.ndarray, np.ndarray]:
    pair = []
    for name, m in (("m_dirac", m_dirac), ("m_majorana", m_majorana)):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
        if np.iscomplexobj(m) and np.max(np.abs(m.imag), initial=0.0) > 0:
            raise ValueError(f"{name} must be real")
        pair.append(np.real(m).astype(float))
    if pair[0].shape != pair[1].shape:
        raise ValueError(f"mass matrices have different shapes: {pair[0].shape} vs {pair[1].shape}")
    return pair[0], pair[1]


def lambda_formula(m_dirac: np.ndarray, m_majorana: np.ndarray, n: int) -> Tuple[float, Dict[str, float]]:
    """a (tr m_D^4 + tr m_M^4) - tr m_D^2 - tr m_M^2 - 2a tr (m_D m_M)^2"""
    a = float(lambda_coefficient(n))
    d2 = m_dirac @ m_dirac
    m2 = m_majorana @ m_majorana
    dm = m_dirac @ m_majorana
    terms = {
        "tr_mD4": float(np.trace(d2 @ d2)),
        "tr_mM4": float(np.trace(m2 @ m2)),
        "tr_mD2": float(np.trace(d2)),
        "tr_mM2": float(np.trace(m2)),
        "tr_cross": float(np.trace(dm @ dm)),
    }
    value = (a * (terms["tr_mD4"] + terms["tr_mM4"]) - terms["tr_mD2"] - terms["tr_mM2"]
             - 2 * a * terms["tr_cross"])
    return value, terms


BLOCK_ROUTE_DEVIATION = "the block route exceeds the closed formula by 2a tr({m_D, m_M}^2)"


def lambda_block_route(m_dirac: np.ndarray, m_majorana: np.ndarray, n: int) -> float:
    """(a tr mu^4 + tr mu^2) / 2^(n+2) for mu of the assembled DYM operator on the neutrino sector"""
    v = m_dirac.shape[0]
    sig = majorana_signature(n)
    stm = build_stm_module(sig, TwistDims(v_r=v, v_l=0, e_r=0, e_l=0))
    capacity = 2
    masses = MassBlockSpec(m_dirac, m_majorana, FourierField.zeros(n, (0, 0), capacity))
    potential = FormField.zeros(n, 1, (stm.W.dim, stm.W.dim), capacity)
    mu = dym_op(stm, potential, masses).mu.zero_mode()
    mu2 = mu @ mu
    a = float(lambda_coefficient(n))
    value = a * np.trace(mu2 @ mu2) + np.trace(mu2)
    return float(np.real(value)) / 2 ** (n + 2)


def lambda_dm(m_dirac, m_majorana, n: int = 4) -> CosmologicalConstant:
    """
    Neutrino-sector cosmological constant by formula and by block trace.

    The block trace exceeds the formula by 2a tr({m_D, m_M}^2); the reported
    route residual compares the measured gap with that prediction.

    Raises:
        ValueError: for non-square, non-real or mismatched mass matrices
    """
    m_dirac, m_majorana = _validate_masses(m_dirac, m_majorana)
    a = lambda_coefficient(n)
    value, terms = lambda_formula(m_dirac, m_majorana, n)
    block = lambda_block_route(m_dirac, m_majorana, n)
    anti = m_dirac @ m_majorana + m_majorana @ m_dirac
    predicted = 2 * float(a) * float(np.trace(anti @ anti))
    gap = block - value
    return CosmologicalConstant(
        n=n,
        a=str(a),
        lambda_dm=value,
        lambda_block=block,
        block_gap=gap,
        predicted_gap=predicted,
        route_residual=abs(gap - predicted) / max(1.0, abs(value), abs(block)),
        known_deviation=BLOCK_ROUTE_DEVIATION,
        terms=terms,
        m_dirac=m_dirac.tolist(),
        m_majorana=m_majorana.tolist(),
    )


def cross_term_law_residual(m_dirac, m_majorana, n: int = 4) -> float:
    """Lambda(D, M) - Lambda(D, 0) - Lambda(0, M) against -2a tr (m_D m_M)^2"""
    m_dirac, m_majorana = _validate_masses(m_dirac, m_majorana)
    zero = np.zeros_like(m_dirac)
    full, terms = lambda_formula(m_dirac, m_majorana, n)
    only_d, _ = lambda_formula(m_dirac, zero, n)
    only_m, _ = lambda_formula(zero, m_majorana, n)
    expected = -2 * float(lambda_coefficient(n)) * terms["tr_cross"]
    return abs(full - only_d - only_m - expected) / max(1.0, abs(expected))


# ----- fermionic pairing ----------------------------------------------------------

@dataclass(frozen=True)
class PairingExpansion:
    direct: complex
    terms: Dict[str, complex]
    residual: float
    cross_antisymmetry: float


def dym_pairing_expansion(dym: DYMOperator, chi: FourierField) -> PairingExpansion:
    """
    <Psi, D_YM Psi>_E for Psi = ((chi, 0), (chi, 0)^cc) against the four-term sum

        (1/2) [<chi, (slash d_A + i phi) chi> + c.c. + <chi, i m chi^cc> - <chi^cc, i m chi>]
    """
    stm = dym.stm
    W = stm.W
    conn_W = ConnectionSpec(W, dym.potential_W)
    phi_W = stm.twist_lift(dym.masses.dirac_twist())
    m_M = stm.twist_lift(dym.masses.majorana_twist())
    big = lift_to_real_form(stm.S, lift_to_dirac(W, chi))
    direct = l2_pairing(big, apply(dym.op, big), stm.E.form)
    chi_cc = W.conjugate_section(chi)
    yukawa = l2_pairing(chi, slash_derivative(conn_W, chi) + 1j * (phi_W @ chi))
    terms = {
        "yukawa": yukawa,
        "yukawa_conjugate": np.conj(yukawa),
        "majorana": l2_pairing(chi, 1j * (m_M @ chi_cc)),
        "majorana_conjugate": -l2_pairing(chi_cc, 1j * (m_M @ chi)),
    }
    total = 0.5 * sum(terms.values())
    return PairingExpansion(
        direct=direct,
        terms=terms,
        residual=_relative(direct, total),
        cross_antisymmetry=_relative(np.conj(terms["majorana"]), terms["majorana_conjugate"]),
    )
