"""
Pauli Checks Service

Checks for the Pauli-type lifts P_D and pi_D of real operators to the doubled
module: pairing equivalence, the kernel witness and the curvature formulas.

Follows SOLID principles:
- Single Responsibility: Only doubling lifts and their curvature endomorphisms
- Dependency Inversion: Operators come from the shared samplers and builders
"""
from typing import List, Tuple
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core.dirac_ops import (
    build_real_simple_type,
    majorana_op,
    real_form_operator,
    reality_residual,
    simple_type_residual,
)
from dirac_verify.core.graded_modules import I2, ONE2, build_real_form_module, double
from dirac_verify.core.pauli_maps import (
    curvature_coefficient,
    fermionic_equivalence,
    pauli_map,
    pauli_witness,
    pi_map,
    relative_curvature,
    simple_type_curvature,
)
from dirac_verify.core.sampling import (
    random_clifford_potential,
    random_end_gamma,
    random_end_gamma_form,
    random_operator,
    random_section,
)
from dirac_verify.models import RealBranch
from dirac_verify.services.check_registry import CheckContext, CheckOutcome

logger = logging.getLogger(__name__)


class PauliChecksService:
    """Service class for Pauli and pi map checks"""

    def checks(self) -> List[Tuple[str, str, object]]:
        return [
            ("pauli.fermionic_equivalence", "<2psi, P_D 2psi> = <psi, D psi>", self.fermionic_equivalence),
            ("pauli.witness", "ker D is not preserved by the Pauli lift", self.witness),
            ("pauli.relative_curvature", "closed-form curvature of simple-type operators", self.relative_curvature),
            ("pauli.pauli_map", "P_D is real and adds i slashF (x) I2", self.pauli_map),
            ("pauli.pi_map", "pi_D keeps simple type for covariantly constant data", self.pi_map),
            ("pauli.dimension_two", "P_D and pi_D in dimension two (recorded)", self.dimension_two),
        ]

    def _real_simple_type(self, ctx: CheckContext, branch: RealBranch, band: int, with_potential: bool = True):
        S = ctx.twisted(w=2, branch=branch)
        capacity = ctx.capacity
        potential = random_clifford_potential(ctx.rng, S, band, capacity) if with_potential else None
        even = random_end_gamma(ctx.rng, S, band, capacity, parity=+1)
        extra = {"chi_prime": even} if S.flags.s_J_gamma > 0 else {"mu": even}
        return build_real_simple_type(
            S,
            potential,
            chi=random_end_gamma(ctx.rng, S, band, capacity, parity=-1),
            sigma=random_end_gamma_form(ctx.rng, S, band, capacity, parity=-1),
            capacity=capacity,
            **extra,
        )

    def fermionic_equivalence(self, ctx: CheckContext) -> CheckOutcome:
        S = ctx.twisted()
        E = build_real_form_module(S)
        P = double(E)
        worst = 0.0
        pointwise = 0.0
        samples = ctx.samples(50)
        for _ in range(samples):
            D = real_form_operator(S, random_operator(ctx.rng, S, ctx.band, ctx.capacity), E)
            psi = random_section(ctx.rng, E, ctx.band, ctx.capacity)
            result = fermionic_equivalence(D, psi, pauli_map(D, P))
            worst = max(worst, result.residual)
            pointwise = max(pointwise, result.pointwise_residual)
        details = {"samples": samples, "pointwise_residual": pointwise, "doubled_dim": P.dim}
        return CheckOutcome(worst, ctx.tolerance(settings.pointwise_tolerance), details)

    def witness(self, ctx: CheckContext) -> CheckOutcome:
        W = ctx.twisted(branch=RealBranch.MINUS)
        mass = float(ctx.rng.uniform(0.5, 1.5))
        found = pauli_witness(W, mass=mass, capacity=ctx.capacity)
        if found is None:
            return CheckOutcome.skip(f"signature {ctx.sig.label} has no on-shell plane wave")
        tol = ctx.tolerance(settings.pointwise_tolerance)
        details = {
            "mass": mass,
            "kernel_residual": found.kernel_residual,
            "curvature_norm": found.curvature_norm,
            "pauli_simple_type_defect": found.pauli_simple_type_defect,
        }
        # psi in ker D, but the curvature term moves it and P_D is not of simple type
        failures = 0
        if found.curvature_norm <= 1e-3:
            failures += 1
        if found.pauli_simple_type_defect <= tol:
            failures += 1
        return CheckOutcome(found.kernel_residual + failures, tol, details)

    def relative_curvature(self, ctx: CheckContext) -> CheckOutcome:
        worst = 0.0
        samples = max(1, ctx.samples(10) // 2)
        for branch in RealBranch:
            for _ in range(samples):
                op = self._real_simple_type(ctx, branch, ctx.band).op
                direct = relative_curvature(op).slash
                closed = simple_type_curvature(op)
                worst = max(worst, (direct - closed).max_abs() / max(1.0, direct.max_abs()))

        # constant Majorana mass: slashF = ((n-1)/n) m^2
        W = ctx.twisted(branch=RealBranch.MINUS)
        m = float(ctx.rng.uniform(0.5, 1.5))
        D = majorana_op(W, m * np.eye(W.dim), capacity=ctx.capacity).op
        expected = curvature_coefficient(ctx.sig.n) * m ** 2 * np.eye(D.module.dim)
        majorana_defect = (relative_curvature(D).slash - expected).max_abs() / max(1.0, m ** 2)
        details = {"samples_per_branch": samples, "majorana_defect": majorana_defect}
        return CheckOutcome(max(worst, majorana_defect), ctx.tolerance(settings.pointwise_tolerance), details)

    def pauli_map(self, ctx: CheckContext) -> CheckOutcome:
        S = ctx.twisted()
        E = build_real_form_module(S)
        P = double(E)
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            D = real_form_operator(S, random_operator(ctx.rng, S, ctx.band, ctx.capacity), E)
            lifted = pauli_map(D, P)
            added = lifted.op.phi - D.phi.kron_left(ONE2)
            expected = (1j * lifted.relative.slash).kron_left(I2)
            scale = max(1.0, lifted.op.phi.max_abs())
            worst = max(worst, (added - expected).max_abs() / scale, reality_residual(lifted.op) / scale)

        generic = random_operator(ctx.rng, E, ctx.band, ctx.capacity)
        try:
            pauli_map(generic, P)
            rejected = False
        except ValueError as e:
            logger.warning("non-real operator rejected by the Pauli map: %s", e)
            rejected = True
        details = {"samples": samples, "non_real_rejected": rejected}
        return CheckOutcome(worst + (0.0 if rejected else 1.0), ctx.tolerance(settings.pointwise_tolerance), details)

    def pi_map(self, ctx: CheckContext) -> CheckOutcome:
        worst = 0.0
        samples = max(1, ctx.samples(6) // 2)
        for branch in RealBranch:
            for _ in range(samples):
                # constant data and A = 0: covariantly constant
                op = self._real_simple_type(ctx, branch, 0, with_potential=False).op
                image = pi_map(op)
                scale = max(1.0, image.op.phi.max_abs())
                worst = max(worst, simple_type_residual(image.op) / scale)

        S = ctx.twisted()
        D = real_form_operator(S, random_operator(ctx.rng, S, ctx.band, ctx.capacity))
        try:
            pi_map(D)
            rejected = False
        except ValueError as e:
            logger.warning("pi map rejected its input: %s", e)
            rejected = True
        details = {"samples_per_branch": samples, "non_simple_type_rejected": rejected}
        return CheckOutcome(worst + (0.0 if rejected else 1.0), ctx.tolerance(settings.pointwise_tolerance), details)

    def dimension_two(self, ctx: CheckContext) -> CheckOutcome:
        if ctx.sig.n != 2:
            return CheckOutcome.skip("recorded only in dimension two", n=ctx.sig.n)
        details = {}
        for branch in RealBranch:
            op = self._real_simple_type(ctx, branch, ctx.band).op
            pauli = pauli_map(op)
            record = {
                "pauli_curvature_norm": pauli.curvature_endo.l2_norm(),
                "pauli_simple_type_defect": simple_type_residual(pauli.op),
            }
            try:
                pi = pi_map(op)
                record["pi_curvature_norm"] = pi.curvature_endo.l2_norm()
                record["pi_simple_type_defect"] = simple_type_residual(pi.op)
                record["pi_minus_pauli"] = (pi.op.phi - pauli.op.phi).max_abs()
            except ValueError as e:
                record["pi_error"] = str(e)
            details[branch.value] = record
        logger.info("dimension-two lifts recorded for %s", ctx.sig.label)
        return CheckOutcome(0.0, ctx.tolerance(settings.pointwise_tolerance), details)


def get_pauli_checks_service() -> PauliChecksService:
    """Dependency injection helper"""
    return PauliChecksService()
