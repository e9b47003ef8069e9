"""
Operator Checks Service

Dirac-type operator checks: symbol, curvature, Bochner and Lichnerowicz
decompositions, simple type, real operators, Klein-Gordon factorization and
equations of motion.

Follows SOLID principles:
- Single Responsibility: Only first- and second-order operator identities
- Dependency Inversion: Works on operator specs produced by the samplers
"""
from typing import List, Tuple
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.dirac_ops import (
    ConnectionSpec,
    DiracOperatorSpec,
    apply,
    bochner,
    bochner_defining_residual,
    build_real_simple_type,
    composition_residual,
    curvature,
    difference_anticommutes,
    dirac_equation_residual,
    dirac_plane_wave,
    dirac_yukawa_op,
    double_bracket_residual,
    dym_equation_residual,
    dym_mode_system,
    dym_op,
    dym_operator_residual,
    dym_plane_wave,
    dym_plane_wave_amplitudes,
    equation_residual,
    klein_gordon_residual,
    lift_to_dirac,
    lift_to_real_form,
    majorana_equation_residual,
    majorana_plane_wave,
    on_shell_momentum,
    on_shell_scale,
    plane_wave_amplitudes,
    plane_wave_dispersion,
    potential_V_D,
    real_form_operator,
    reality_residual,
    shares_bochner_connection,
    simple_type_residual,
    slash,
)
from dirac_verify.core.fourier_fields import FormField, FourierField, covariant_exterior
from dirac_verify.core.graded_modules import MassBlockSpec, build_dirac_module, build_real_form_module
from dirac_verify.core.sampling import (
    anticommuting_part,
    random_clifford_potential,
    random_complex,
    random_end_gamma,
    random_end_gamma_form,
    random_endo,
    random_masses,
    random_operator,
    random_scalar,
    random_section,
)
from dirac_verify.models import RealBranch
from dirac_verify.services.check_registry import CheckContext, CheckOutcome

logger = logging.getLogger(__name__)


def _rel(diff: float, *scales: float) -> float:
    return diff / max([1.0] + [float(s) for s in scales])


class OperatorChecksService:
    """Service class for Dirac-type operator checks"""

    def checks(self) -> List[Tuple[str, str, object]]:
        return [
            ("operators.symbol", "[D, f] = gamma(df)", self.symbol),
            ("operators.curvature", "F = dA + A^A and the Bianchi identity", self.curvature),
            ("operators.bochner_defining", "defining property of the Bochner connection", self.bochner_defining),
            ("operators.lichnerowicz", "D^2 = Delta_B + V_D", self.lichnerowicz),
            ("operators.composition", "D1 D2 = Delta_H + V_H", self.composition),
            ("operators.potential_identity", "tr V_D = universal Lagrangian + div xi", self.potential_identity),
            ("operators.flat_lichnerowicz", "(slash d_A)^2 = Delta_A + delta_gamma(F_A)", self.flat_lichnerowicz),
            ("operators.simple_type", "shared Bochner connection iff anticommuting difference", self.simple_type),
            ("operators.real_simple_type", "real simple-type constructions on both branches", self.real_simple_type),
            ("operators.klein_gordon", "D_D^2 = slash d^2 + m^2", self.klein_gordon),
            ("operators.equations", "plane-wave solutions of the equations of motion", self.equations),
            ("operators.real_form", "diag(D, D^cc) is real and intertwines the lift", self.real_form),
        ]

    def symbol(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        wave = FourierField.plane_wave(tuple([1] + [0] * (sig.n - 1)), 1.0, ctx.capacity)
        for _ in range(samples):
            D = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            psi = random_section(ctx.rng, W, ctx.band, ctx.capacity)
            for f in (random_scalar(ctx.rng, sig.n, ctx.band, ctx.capacity), wave):
                lhs = apply(D, f * psi) - f * apply(D, psi)
                rhs = None
                for k, g in enumerate(W.gammas):
                    term = f.derive(k) * (g @ psi)
                    rhs = term if rhs is None else rhs + term
                worst = max(worst, _rel((lhs - rhs).l2_norm(), lhs.l2_norm()))
        flat = DiracOperatorSpec(ConnectionSpec.flat(W, ctx.capacity), FourierField.zeros(sig.n, (W.dim, W.dim), ctx.capacity))
        constant = FourierField.constant(random_complex(ctx.rng, (W.dim,)), sig.n, ctx.capacity)
        worst = max(worst, apply(flat, constant).max_abs())
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), {"samples": samples})

    def curvature(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            conn = ConnectionSpec(W, random_clifford_potential(ctx.rng, W, ctx.band, ctx.capacity))
            F = curvature(conn)
            A = conn.potential
            for i in range(sig.n):
                for j in range(i + 1, sig.n):
                    direct = A[j].derive(i) - A[i].derive(j) + A[i] @ A[j] - A[j] @ A[i]
                    worst = max(worst, _rel((F.component(i, j) - direct).max_abs(), F.max_abs()))
            if sig.n >= 3:
                bianchi = covariant_exterior(A, F)
                worst = max(worst, _rel(bianchi.max_abs(), F.max_abs()))
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), {"samples": samples})

    def bochner_defining(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            D = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            f = random_scalar(ctx.rng, W.sig.n, ctx.band, ctx.capacity)
            psi = random_section(ctx.rng, W, ctx.band, ctx.capacity)
            worst = max(worst, bochner_defining_residual(D, f, psi))
        return CheckOutcome(worst, ctx.tolerance(settings.composed_tolerance), {"samples": samples})

    def lichnerowicz(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(20)
        for _ in range(samples):
            D = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            psi = random_section(ctx.rng, W, ctx.band, ctx.capacity)
            worst = max(worst, composition_residual(D, D, psi))
        return CheckOutcome(worst, ctx.tolerance(settings.composed_tolerance), {"samples": samples})

    def composition(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(20)
        for _ in range(samples):
            D1 = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            D2 = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            psi = random_section(ctx.rng, W, ctx.band, ctx.capacity)
            worst = max(worst, composition_residual(D1, D2, psi))
        return CheckOutcome(worst, ctx.tolerance(settings.composed_tolerance), {"samples": samples})

    def potential_identity(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        xi_max = 0.0
        samples = ctx.samples(10)
        for _ in range(samples):
            D = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            data = bochner(D)
            worst = max(worst, potential_V_D(D, data).residual)
            xi_max = max(xi_max, max(x.max_abs() for x in data.xi))
        details = {"samples": samples, "xi_max": xi_max}
        return CheckOutcome(max(worst, xi_max), ctx.tolerance(settings.composed_tolerance), details)

    def flat_lichnerowicz(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        n = W.sig.n
        worst = 0.0
        samples = ctx.samples(5)
        zero = FourierField.zeros(n, (W.dim, W.dim), ctx.capacity)
        for _ in range(samples):
            conn = ConnectionSpec(W, random_clifford_potential(ctx.rng, W, ctx.band, ctx.capacity))
            D = DiracOperatorSpec(conn, zero)
            expected = cf.quantize_form(W.gammas, curvature(conn).components)
            worst = max(worst, _rel((bochner(D).potential - expected).max_abs(), expected.max_abs()))
            psi = random_section(ctx.rng, W, ctx.band, ctx.capacity)
            worst = max(worst, composition_residual(D, D, psi))
        return CheckOutcome(worst, ctx.tolerance(settings.composed_tolerance), {"samples": samples})

    def simple_type(self, ctx: CheckContext) -> CheckOutcome:
        """
        Random pairs D2 = D1 + X (optionally with a compensated connection
        shift): the shared-Bochner test and the anticommuting-difference test
        must agree, and match how X was drawn.
        """
        W = ctx.twisted()
        n, band, capacity = W.sig.n, ctx.band, ctx.capacity
        samples = ctx.samples(20)
        disagreements = 0
        for i in range(samples):
            D1 = random_operator(ctx.rng, W, band, capacity)
            X = random_endo(ctx.rng, W, band, capacity, 0.5)
            anticommuting = i % 2 == 0
            if anticommuting:
                X = anticommuting_part(W, X)
            if i % 4 in (2, 3):
                beta = random_clifford_potential(ctx.rng, W, band, capacity, scale=0.5)
                D2 = DiracOperatorSpec(D1.conn.shifted(beta), D1.phi - slash(W.gammas, beta) + X)
            else:
                D2 = D1.with_phi(D1.phi + X)
            shared = shares_bochner_connection(D1, D2)
            anti = difference_anticommutes(D1, D2)
            if shared != anti or shared != anticommuting:
                disagreements += 1
                logger.warning("simple-type predicates disagree on pair %d (shared=%s, anticommuting=%s)",
                               i, shared, anti)

        # D = slash(d_A) + tau chi is of simple type, a generic D is not
        chi = random_end_gamma(ctx.rng, W, band, capacity)
        conn = ConnectionSpec(W, random_clifford_potential(ctx.rng, W, band, capacity))
        simple = DiracOperatorSpec(conn, W.tau @ chi)
        simple_defect = _rel(simple_type_residual(simple), chi.max_abs())
        generic_defect = simple_type_residual(random_operator(ctx.rng, W, band, capacity))
        generic_rejected = generic_defect > settings.pointwise_tolerance

        # slash d + m: Phi_D = (1 - n) m
        m = float(ctx.rng.uniform(0.5, 1.5))
        mass = DiracOperatorSpec(ConnectionSpec.flat(W, capacity),
                                 FourierField.constant(m * np.eye(W.dim), n, capacity))
        phi_D = bochner(mass, with_potential=False).phi_D
        mass_defect = _rel((phi_D - (1 - n) * m * np.eye(W.dim)).max_abs(), m)

        residual = float(disagreements) + simple_defect + mass_defect + (0.0 if generic_rejected else 1.0)
        details = {
            "pairs": samples,
            "disagreements": disagreements,
            "constructed_defect": simple_defect,
            "generic_defect": generic_defect,
            "mass_witness_defect": mass_defect,
        }
        return CheckOutcome(residual, ctx.tolerance(settings.pointwise_tolerance), details)

    def real_simple_type(self, ctx: CheckContext) -> CheckOutcome:
        band, capacity = ctx.band, ctx.capacity
        samples = max(1, ctx.samples(20) // 2)
        worst = 0.0
        rejected = {}
        for branch in RealBranch:
            S = ctx.twisted(w=2, branch=branch)
            E = build_real_form_module(S)
            s = S.flags.s_J_gamma
            for _ in range(samples):
                potential = random_clifford_potential(ctx.rng, S, band, capacity)
                chi = random_end_gamma(ctx.rng, S, band, capacity, parity=-1)
                sigma = random_end_gamma_form(ctx.rng, S, band, capacity, parity=-1)
                even = random_end_gamma(ctx.rng, S, band, capacity, parity=+1)
                extra = {"chi_prime": even} if s > 0 else {"mu": even}
                built = build_real_simple_type(S, potential, chi, sigma, capacity=capacity, E=E, **extra)
                scale = built.op.phi.max_abs()
                worst = max(
                    worst,
                    _rel(reality_residual(built.op), scale),
                    _rel(simple_type_residual(built.op), scale),
                    _rel(double_bracket_residual(S, built.phi_S, built.branch), scale),
                )
            # an even chi is inadmissible on either branch
            wrong = random_end_gamma(ctx.rng, S, band, capacity, parity=+1)
            try:
                build_real_simple_type(S, potential, chi=wrong, capacity=capacity, E=E)
                rejected[branch.value] = False
            except ValueError as e:
                logger.warning("inadmissible simple-type data rejected (%s branch): %s", branch.value, e)
                rejected[branch.value] = True
        missing = sum(1 for ok in rejected.values() if not ok)
        details = {"constructions_per_branch": samples, "rejected": rejected}
        return CheckOutcome(worst + missing, ctx.tolerance(settings.pointwise_tolerance), details)

    def klein_gordon(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        if not sig.admits_majorana:
            return CheckOutcome.skip(f"signature {sig.label} admits no Majorana module")
        n, capacity = sig.n, ctx.capacity
        W = ctx.twisted(branch=RealBranch.MINUS)
        S = build_dirac_module(W)
        m = float(ctx.rng.uniform(0.5, 1.5))
        phi = FourierField.constant(m * np.eye(W.dim), n, capacity)
        D = dirac_yukawa_op(W, FormField.zeros(n, 1, (W.dim, W.dim), capacity), phi, S)
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            psi = random_section(ctx.rng, S, ctx.band, capacity)
            worst = max(worst, klein_gordon_residual(D, m, psi))
            k = tuple(int(x) for x in ctx.rng.integers(-1, 2, size=n))
            wave = FourierField.plane_wave(k, random_complex(ctx.rng, (S.dim,)), capacity)
            twice = apply(D, apply(D, wave))
            expected = plane_wave_dispersion(sig, k, m) * wave
            worst = max(worst, _rel((twice - expected).l2_norm(), twice.l2_norm()))
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), {"samples": samples, "mass": m})

    def equations(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        k = on_shell_momentum(sig)
        if k is None:
            return CheckOutcome.skip(f"signature {sig.label} has no direction with epsilon eta = +1")
        n, band, capacity = sig.n, ctx.band, ctx.capacity
        tol = ctx.tolerance(settings.composed_tolerance)
        W = ctx.twisted(branch=RealBranch.MINUS)
        flat = ConnectionSpec.flat(W, capacity)
        mass = np.eye(W.dim, dtype=complex)
        basis = plane_wave_amplitudes(W, k, mass)
        details = {"momentum": k.tolist(), "kernel_dim": int(basis.shape[1])}
        worst = 0.0

        def wave_amplitude():
            return basis @ random_complex(ctx.rng, (basis.shape[1],))

        def split(result, norm):
            return max(result.total, result.right, result.left) / max(1.0, norm)

        chi = dirac_plane_wave(k, wave_amplitude(), capacity)
        worst = max(worst, split(dirac_equation_residual(flat, mass, chi), chi.l2_norm()))
        nu = majorana_plane_wave(W, k, wave_amplitude(), capacity)
        majorana = majorana_equation_residual(flat, mass, nu)
        details["majorana_split"] = {"right": majorana.right, "left": majorana.left}
        worst = max(worst, majorana.total / max(1.0, nu.l2_norm()))
        details["majorana_reality"] = (W.conjugate_section(nu) - nu).max_abs()
        worst = max(worst, details["majorana_reality"])

        if not sig.admits_majorana:
            details["dym"] = "skipped: no Majorana module"
            return CheckOutcome(worst, tol, details)

        # fermion doubling: (chi, 0) in ker D_D exactly when chi solves the Dirac equation
        S = build_dirac_module(W)
        zero_potential = FormField.zeros(n, 1, (W.dim, W.dim), capacity)
        D_D = dirac_yukawa_op(W, zero_potential, FourierField.constant(mass, n, capacity), S)
        mismatches = 0
        candidates = ctx.samples(20)
        for i in range(candidates):
            solution = i % 2 == 0
            candidate = dirac_plane_wave(k, wave_amplitude(), capacity) if solution else \
                random_section(ctx.rng, W, band, capacity)
            norm = max(1.0, candidate.l2_norm())
            lifted = equation_residual("dirac_yukawa", op=D_D, psi=lift_to_dirac(W, candidate))
            direct = dirac_equation_residual(flat, mass, candidate)
            worst = max(worst, abs(lifted.total - direct.total) / norm, lifted.right / norm)
            in_kernel = lifted.total <= tol * norm
            if in_kernel != (direct.total <= tol * norm) or in_kernel != solution:
                mismatches += 1
        details["doubling_candidates"] = candidates
        details["doubling_mismatches"] = mismatches

        # DYM plane wave: random symmetric m_D, m_M and a constant Hermitian phi_e, scaled on shell
        stm = ctx.stm()
        dims = stm.dims
        if dims.v == 0:
            details["dym"] = "skipped: empty neutrino block"
            return CheckOutcome(worst + mismatches, tol, details)
        m_d, m_m = random_masses(ctx.rng, dims.v)
        h = random_complex(ctx.rng, (dims.e, dims.e))
        phi_e = 0.5 * (h + h.conj().T)
        flat_W = FormField.zeros(n, 1, (stm.W.dim, stm.W.dim), capacity)

        def masses(dirac, majorana, charged):
            return MassBlockSpec(dirac, majorana, FourierField.constant(charged, n, capacity))

        def system(spec):
            return dym_mode_system(dym_op(stm, flat_W, spec), k)

        massless = system(masses(0 * m_d, 0 * m_m, 0 * phi_e))
        s = on_shell_scale(massless, system(masses(m_d, m_m, 0 * phi_e)))
        t = on_shell_scale(massless, system(masses(0 * m_d, 0 * m_m, phi_e))) if dims.e else 1.0
        if s is None or t is None:
            details["dym"] = "no real on-shell scaling"
            return CheckOutcome(np.inf, tol, details)
        dym = dym_op(stm, flat_W, masses(s * m_d, s * m_m, t * phi_e))
        dym_basis = dym_plane_wave_amplitudes(dym, k)
        details["dym_kernel_dim"] = int(dym_basis.shape[1])
        if dym_basis.shape[1] == 0:
            return CheckOutcome(np.inf, tol, details)
        chi = dym_plane_wave(stm.W, k, dym_basis @ random_complex(ctx.rng, (dym_basis.shape[1],)), capacity)
        norm = max(1.0, chi.l2_norm())
        dym_result = dym_equation_residual(dym, chi)
        details["dym_split"] = {"right": dym_result.right, "left": dym_result.left}
        worst = max(worst, dym_result.total / norm)
        details["dym_operator_residual"] = dym_operator_residual(dym, chi) / norm
        worst = max(worst, details["dym_operator_residual"])
        # the wave must feel the sign of the Majorana mass
        flipped = dym_op(stm, flat_W, masses(s * m_d, -s * m_m, t * phi_e))
        details["flipped_majorana_residual"] = dym_operator_residual(flipped, chi) / norm
        if details["flipped_majorana_residual"] <= tol:
            mismatches += 1
        return CheckOutcome(worst + mismatches, tol, details)

    def real_form(self, ctx: CheckContext) -> CheckOutcome:
        S = ctx.twisted()
        E = build_real_form_module(S)
        j_squared = S.flags.j_squared
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            D = random_operator(ctx.rng, S, ctx.band, ctx.capacity)
            D_E = real_form_operator(S, D, E)
            worst = max(worst, _rel(reality_residual(D_E), D_E.phi.max_abs()))
            psi = random_section(ctx.rng, S, ctx.band, ctx.capacity)
            image = apply(D, psi)
            # J^2 = j_squared, so D^cc J psi = j_squared J D psi
            expected = FourierField.stack([image, j_squared * S.conjugate_section(image)])
            lifted = apply(D_E, lift_to_real_form(S, psi))
            worst = max(worst, _rel((lifted - expected).l2_norm(), image.l2_norm()))
        details = {"samples": samples, "module_dim": E.dim, "j_squared": j_squared}
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), details)


def get_operator_checks_service() -> OperatorChecksService:
    """Dependency injection helper"""
    return OperatorChecksService()
