"""
Lagrangian Checks Service

Action-level checks: universal Lagrangian, translation invariance,
Einstein-Hilbert and Yang-Mills-Higgs curvature, the DYM trace identities
with coefficient refits, and the neutrino-sector cosmological constant.

Follows SOLID principles:
- Single Responsibility: Only integrated identities and their coefficients
- Open/Closed: New identities are added as check methods without touching the runner
"""
from typing import Dict, List, Tuple
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core.dirac_ops import ConnectionSpec, dym_op
from dirac_verify.core.graded_modules import MassBlockSpec
from dirac_verify.core.lagrangians import (
    TERM_NAMES,
    constant_mass_ymh_residual,
    cross_term_law_residual,
    dym_pairing_expansion,
    dym_terms,
    eh_flat_identity,
    higgs_lambda,
    lambda_coefficient,
    lambda_dm,
    lambda_formula,
    pi_identity,
    pi_weights,
    refit_coefficients,
    stm_identity,
    stm_weights,
    translation_invariance,
    universal_lagrangian,
    ymh_curvature,
)
from dirac_verify.core.sampling import (
    random_clifford_potential,
    random_dym,
    random_end_gamma,
    random_end_gamma_form,
    random_masses,
    random_operator,
    random_section,
)
from dirac_verify.services.check_registry import CheckContext, CheckOutcome

logger = logging.getLogger(__name__)

# homogeneity of each term under mu -> 2 mu
SCALING = {"yang_mills": 1.0, "higgs_kinetic": 4.0, "quartic": 16.0, "quadratic": 4.0}


def _majorana_only(ctx: CheckContext):
    if not ctx.sig.admits_majorana:
        return CheckOutcome.skip(f"signature {ctx.sig.label} admits no Majorana module")
    return None


def _scales(ctx: CheckContext, count: int) -> List[Tuple[float, float]]:
    """(mass_scale, potential_scale) pairs spread over an order of magnitude"""
    return [(float(ctx.rng.uniform(0.3, 2.0)), float(ctx.rng.uniform(0.3, 2.0))) for _ in range(count)]


class LagrangianChecksService:
    """Service class for Lagrangian and trace-identity checks"""

    def checks(self) -> List[Tuple[str, str, object]]:
        return [
            ("lagrangians.universal", "pointwise universal Lagrangian and its integral", self.universal),
            ("lagrangians.translation", "action invariant under End_gamma translations", self.translation),
            ("lagrangians.eh_flat", "Einstein-Hilbert term on the flat torus", self.eh_flat),
            ("lagrangians.ymh", "Yang-Mills-Higgs curvature of slash(d_A) + Phi_H", self.ymh),
            ("lagrangians.higgs_ratio", "lambda_H / tr Phi_H^2 = epsilon / n", self.higgs_ratio),
            ("lagrangians.stm_identity", "DYM trace identity through the Pauli lift", self.stm_identity),
            ("lagrangians.pi_identity", "DYM trace identity through the pi map", self.pi_identity),
            ("lagrangians.lambda_dm", "neutrino cosmological constant by two routes", self.lambda_dm),
            ("lagrangians.dym_pairing", "fermionic pairing of the DYM operator", self.dym_pairing),
        ]

    def universal(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        xi_max = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            result = universal_lagrangian(random_operator(ctx.rng, W, ctx.band, ctx.capacity))
            # div xi integrates to zero
            gap = abs(result.trace_potential_integral - result.integral)
            scale = max(1.0, abs(result.integral), abs(result.trace_potential_integral))
            worst = max(worst, result.pointwise_residual, gap / scale)
            xi_max = max(xi_max, result.xi_max)
        details = {"samples": samples, "xi_max": xi_max}
        return CheckOutcome(max(worst, xi_max), ctx.tolerance(settings.composed_tolerance), details)

    def translation(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        pointwise = 0.0
        samples = ctx.samples(20)
        for _ in range(samples):
            D = random_operator(ctx.rng, W, ctx.band, ctx.capacity)
            alpha = random_end_gamma_form(ctx.rng, W, ctx.band, ctx.capacity)
            result = translation_invariance(D, alpha)
            worst = max(worst, result.residual)
            pointwise = max(pointwise, result.pointwise_residual)
        details = {"samples": samples, "pointwise_residual": pointwise}
        return CheckOutcome(worst, ctx.tolerance(settings.composed_tolerance), details)

    def eh_flat(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            conn = ConnectionSpec(W, random_clifford_potential(ctx.rng, W, ctx.band, ctx.capacity))
            worst = max(worst, eh_flat_identity(conn).residual)
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), {"samples": samples})

    def ymh(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            conn = ConnectionSpec(W, random_clifford_potential(ctx.rng, W, ctx.band, ctx.capacity))
            phi_H = random_end_gamma(ctx.rng, W, ctx.band, ctx.capacity)
            result = ymh_curvature(conn, phi_H)
            scale = max(1.0, result.F_ymh.max_abs())
            worst = max(worst, result.auxiliary_residual / scale, result.dirac_connection_residual / scale)
        m = float(ctx.rng.uniform(0.5, 1.5))
        constant = constant_mass_ymh_residual(W, m, ctx.capacity)
        details = {"samples": samples, "constant_mass_residual": constant}
        tol = ctx.tolerance(settings.pointwise_tolerance)
        if constant > settings.algebra_tolerance:
            return CheckOutcome(max(worst, 2 * tol), tol, details,
                                message=f"constant-mass curvature off by {constant:.3e}")
        return CheckOutcome(worst, tol, details)

    def higgs_ratio(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted()
        worst = 0.0
        samples = ctx.samples(5)
        expected = None
        for _ in range(samples):
            result = higgs_lambda(W, random_end_gamma(ctx.rng, W, ctx.band, ctx.capacity))
            expected = result.expected
            worst = max(worst, abs(result.ratio - float(result.expected)))
        details = {"samples": samples, "expected": str(expected)}
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), details)

    def stm_identity(self, ctx: CheckContext) -> CheckOutcome:
        skipped = _majorana_only(ctx)
        if skipped:
            return skipped
        sig = ctx.sig
        stm = ctx.stm()
        samples = max(5, ctx.samples(5))
        worst: Dict[str, float] = {}
        fit_samples = []
        for mass_scale, potential_scale in _scales(ctx, samples):
            dym = random_dym(ctx.rng, stm, ctx.band, ctx.capacity, ctx.config.hermiticity,
                             mass_scale=mass_scale, potential_scale=potential_scale, axes=ctx.heavy_axes)
            report = stm_identity(dym)
            for name, value in report.residuals.items():
                worst[name] = max(worst.get(name, 0.0), value)
            fit_samples.append(report.terms)
        fit = refit_coefficients(fit_samples, "lhs", stm_weights(sig.n, sig.epsilon))
        homogeneity = self._homogeneity(ctx, stm)
        details = {
            "samples": samples,
            "residuals": worst,
            "fitted": fit.fitted,
            "expected": {k: str(v) for k, v in fit.expected.items()},
            "fit_residual": fit.fit_residual,
            "homogeneity": homogeneity,
        }
        residual = max(list(worst.values()) + [fit.max_error, fit.fit_residual, homogeneity])
        logger.info("stm refit for %s: max coefficient error %.3e", sig.label, fit.max_error)
        return CheckOutcome(residual, ctx.tolerance(settings.integral_tolerance), details)

    def _homogeneity(self, ctx: CheckContext, stm) -> float:
        """Scale every mass by 2 and compare each term with its homogeneity degree"""
        dym = random_dym(ctx.rng, stm, ctx.band, ctx.capacity, ctx.config.hermiticity, axes=ctx.heavy_axes)
        masses = dym.masses
        doubled = MassBlockSpec(2.0 * np.asarray(masses.m_dirac_nu), 2.0 * np.asarray(masses.m_majorana_nu),
                                2.0 * masses.phi_e)
        before = dym_terms(dym)
        after = dym_terms(dym_op(stm, dym.potential_W, doubled))
        worst = 0.0
        for name in TERM_NAMES:
            expected = SCALING[name] * before[name]
            worst = max(worst, abs(after[name] - expected) / max(1.0, abs(expected)))
        return worst

    def pi_identity(self, ctx: CheckContext) -> CheckOutcome:
        skipped = _majorana_only(ctx)
        if skipped:
            return skipped
        sig = ctx.sig
        stm = ctx.stm()
        samples = max(5, ctx.samples(5))
        worst: Dict[str, float] = {}
        fit_samples = []
        simple_images = 0
        for i, (mass_scale, potential_scale) in enumerate(_scales(ctx, samples + 1)):
            # the first operator is flat with constant masses, so its image stays simple type
            first = i == 0
            dym = random_dym(ctx.rng, stm, 0 if first else ctx.band, ctx.capacity,
                             ctx.config.hermiticity, mass_scale=mass_scale,
                             potential_scale=potential_scale, flat=first, axes=ctx.heavy_axes)
            report = pi_identity(dym)
            if report.flags.get("simple_type_image") == "true":
                simple_images += 1
            for name, value in report.residuals.items():
                worst[name] = max(worst.get(name, 0.0), value)
            if not first:
                fit_samples.append(report.terms)
        fit = refit_coefficients(fit_samples, "trace_phi_sq", pi_weights(sig.n, sig.epsilon))
        details = {
            "samples": samples + 1,
            "residuals": worst,
            "simple_type_images": simple_images,
            "fitted": fit.fitted,
            "expected": {k: str(v) for k, v in fit.expected.items()},
        }
        tol = ctx.tolerance(settings.integral_tolerance)
        residual = max([worst.get("closed_form", 0.0), worst.get("action", 0.0), fit.max_error])
        # omega contraction and xi carry their own, tighter bounds
        problems = []
        if worst.get("omega_contraction", 0.0) > settings.pointwise_tolerance:
            problems.append("omega contraction out of bounds")
        if worst.get("xi", 0.0) > settings.algebra_tolerance:
            problems.append("Dirac vector field does not vanish")
        if simple_images == 0:
            problems.append("no pi image of simple type")
        if problems:
            residual = max(residual, 2 * tol)
        return CheckOutcome(residual, tol, details, message="; ".join(problems))

    def lambda_dm(self, ctx: CheckContext) -> CheckOutcome:
        n = ctx.sig.n
        a = lambda_coefficient(n)
        worst = 0.0
        samples = ctx.samples(20)
        pairs = []
        masses = ctx.config.masses
        if masses.m_dirac is not None and masses.m_majorana is not None:
            pairs.append((np.array(masses.m_dirac, dtype=float), np.array(masses.m_majorana, dtype=float)))
        for _ in range(samples):
            pairs.append(random_masses(ctx.rng, int(ctx.rng.integers(1, 4))))
        for m_dirac, m_majorana in pairs:
            result = lambda_dm(m_dirac, m_majorana, n)
            worst = max(worst, result.route_residual, cross_term_law_residual(m_dirac, m_majorana, n))

        # fixed examples: zero masses and a lone identity Dirac mass
        d = 2
        zero = np.zeros((d, d))
        anchors = {
            "zero": abs(lambda_formula(zero, zero, n)[0]),
            "identity_dirac": abs(lambda_formula(np.eye(d), zero, n)[0] - float((a - 1) * d)),
        }
        worst = max([worst] + list(anchors.values()))
        details = {"pairs": len(pairs), "a": str(a), "anchors": anchors}
        if ctx.config.masses.m_dirac is not None and ctx.config.masses.m_majorana is not None:
            details["configured"] = lambda_dm(*pairs[0], n).model_dump()
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), details)

    def dym_pairing(self, ctx: CheckContext) -> CheckOutcome:
        skipped = _majorana_only(ctx)
        if skipped:
            return skipped
        stm = ctx.stm()
        worst = 0.0
        antisymmetry = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            dym = random_dym(ctx.rng, stm, ctx.band, ctx.capacity, ctx.config.hermiticity, axes=ctx.heavy_axes)
            chi = random_section(ctx.rng, stm.W, ctx.band, ctx.capacity, axes=ctx.heavy_axes)
            result = dym_pairing_expansion(dym, chi)
            worst = max(worst, result.residual)
            antisymmetry = max(antisymmetry, result.cross_antisymmetry)
        details = {"samples": samples, "cross_antisymmetry": antisymmetry}
        return CheckOutcome(max(worst, antisymmetry), ctx.tolerance(settings.integral_tolerance), details)


def get_lagrangian_checks_service() -> LagrangianChecksService:
    """Dependency injection helper"""
    return LagrangianChecksService()
