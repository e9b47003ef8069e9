"""
Clifford Checks Service

Fiber-level checks: Clifford relation, Chevalley symbol round trip, chirality,
canonical one-form, opposite action, module axioms and field kernels.

Follows SOLID principles:
- Single Responsibility: Only algebraic and field-kernel checks
- Open/Closed: New checks are added to checks() without touching the runner
"""
from typing import List, Tuple
import logging

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.fourier_fields import CapacityExceeded, FormField, FourierField, exterior_derivative
from dirac_verify.core.graded_modules import (
    EPS2,
    ONE2,
    I2,
    build_dirac_module,
    build_real_form_module,
    charged_yukawa_endo,
    diagonal_embed,
    double,
    pauli_membership,
    yukawa_mapping,
)
from dirac_verify.core.sampling import random_complex, random_field, random_scalar
from dirac_verify.models import RealBranch, TwistDims
from dirac_verify.services.check_registry import CheckContext, CheckOutcome

logger = logging.getLogger(__name__)


def _max_abs(x) -> float:
    return float(np.max(np.abs(x), initial=0.0))


def _axiom_residual(module) -> float:
    """Largest violation of the measured module axioms"""
    sig = module.sig
    eye = np.eye(module.dim)
    worst = _max_abs(module.tau @ module.tau - eye)
    for a, ga in enumerate(module.gammas):
        for b, gb in enumerate(module.gammas):
            expected = 2 * sig.epsilon * sig.eta[a] * (a == b) * eye
            worst = max(worst, _max_abs(cf.anticommutator(ga, gb) - expected))
    s = module.flags.s_tau_gamma
    for g in module.gammas:
        worst = max(worst, _max_abs(module.tau @ g - s * g @ module.tau))
    if module.is_real:
        flags = module.flags
        X = module.conj
        worst = max(worst, _max_abs(X @ np.conj(X) - flags.j_squared * eye))
        for g in module.gammas:
            worst = max(worst, _max_abs(module.conjugate_endo(g) - flags.s_J_gamma * g))
        worst = max(worst, _max_abs(module.conjugate_endo(module.tau) - flags.s_J_tau * module.tau))
    return worst


class CliffordChecksService:
    """Service class for fiber, module and field-kernel checks"""

    def checks(self) -> List[Tuple[str, str, object]]:
        return [
            ("clifford.anticommutation", "gamma(a)gamma(b) + gamma(b)gamma(a) = 2 eps g(a,b)", self.anticommutation),
            ("clifford.symbol_round_trip", "symbol map inverts quantization", self.symbol_round_trip),
            ("clifford.chirality", "tau_M is an involution anticommuting with gamma", self.chirality),
            ("clifford.theta_inverse", "delta_gamma(ext_Theta(Phi)) = Phi", self.theta_inverse),
            ("clifford.opposite_action", "opposite action commutes with gamma and is Clifford", self.opposite_action),
            ("clifford.quantized_trace", "tr delta_gamma(x) = 2^n x_0", self.quantized_trace),
            ("modules.axioms", "grading, Clifford, real-structure signs hold on all constructions", self.module_axioms),
            ("modules.conjugation", "J is an antilinear involution up to sign", self.conjugation),
            ("modules.pauli_subbundle", "D (x) 1 + phi (x) eps2 preserves diagonal sections", self.pauli_subbundle),
            ("modules.stm_projectors", "chirality x inner projectors on the two-sector module", self.stm_projectors),
            ("modules.yukawa", "charged Yukawa block is Hermitian and odd", self.yukawa),
            ("fields.exactness", "spectral derivatives are exact", self.field_exactness),
            ("fields.capacity", "products beyond the band limit are refused", self.field_capacity),
        ]

    def anticommutation(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        worst = 0.0
        samples = ctx.samples(200)
        for _ in range(samples):
            a, b = ctx.rng.standard_normal(sig.n), ctx.rng.standard_normal(sig.n)
            ga, gb = cf.gamma_of(sig, a), cf.gamma_of(sig, b)
            expected = 2 * sig.epsilon * float(np.sum(sig.eta * a * b)) * np.eye(2 ** sig.n)
            worst = max(worst, _max_abs(cf.anticommutator(ga, gb) - expected))
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def symbol_round_trip(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        worst = 0.0
        samples = ctx.samples(200)
        for _ in range(samples):
            vector = random_complex(ctx.rng, (2 ** sig.n,))
            omega = cf.Multivector.from_vector(sig.n, vector)
            element = cf.quantize(sig, omega)
            worst = max(worst, _max_abs(cf.symbol_map(sig, element).to_vector(sig.n) - vector))
            # quantization of the symbol recovers the Clifford element
            again = cf.quantize(sig, cf.symbol_map(sig, element))
            worst = max(worst, _max_abs(again - element))
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def chirality(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        tau = cf.chirality(sig)
        worst = _max_abs(tau @ tau - np.eye(2 ** sig.n))
        for g in cf.gamma_matrices(sig):
            worst = max(worst, _max_abs(cf.anticommutator(tau, g)))
        details = {"exponent": sig.chirality_exponent, "prefactor": str(cf.chirality_prefactor(sig))}
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), details)

    def theta_inverse(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        worst = 0.0
        samples = ctx.samples(200)
        modules = [ctx.twisted()]
        for _ in range(samples):
            for module in modules:
                phi = random_complex(ctx.rng, (module.dim, module.dim))
                components = cf.ext_theta(sig, module.gammas, phi)
                worst = max(worst, _max_abs(cf.quantize_form(module.gammas, components) - phi))
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def opposite_action(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        gammas = cf.gamma_matrices(sig)
        ops = cf.opposite_gammas(sig)
        eye = np.eye(2 ** sig.n)
        worst = 0.0
        for a in range(sig.n):
            for b in range(sig.n):
                worst = max(worst, _max_abs(cf.commutator(gammas[a], ops[b])))
                expected = 2 * sig.epsilon * sig.eta[a] * (a == b) * eye
                worst = max(worst, _max_abs(cf.anticommutator(ops[a], ops[b]) - expected))
        samples = ctx.samples(200)
        for _ in range(samples):
            alpha = ctx.rng.standard_normal(sig.n)
            # right multiplication: symbol of x gamma(alpha)
            x = random_complex(ctx.rng, (2 ** sig.n,))
            element = cf.quantize(sig, cf.Multivector.from_vector(sig.n, x))
            expected = cf.symbol_map(sig, element @ cf.gamma_of(sig, alpha)).to_vector(sig.n)
            worst = max(worst, _max_abs(cf.opposite_action(sig, alpha) @ x - expected))
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def quantized_trace(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        gammas = cf.gamma_matrices(sig)
        eye = np.eye(2 ** sig.n)
        worst = 0.0
        samples = ctx.samples(200)
        for _ in range(samples):
            values = random_complex(ctx.rng, (2 ** sig.n,))
            components = {b: values[i] * eye for i, b in enumerate(cf.blades(sig.n))}
            trace = cf.quantized_trace(gammas, components)
            worst = max(worst, abs(trace - 2 ** sig.n * values[0]) / 2 ** sig.n)
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def module_axioms(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        modules = [ctx.twisted(branch=branch) for branch in RealBranch]
        modules += [build_real_form_module(m) for m in list(modules)]
        if sig.admits_majorana:
            W = ctx.twisted(branch=RealBranch.MINUS)
            S = build_dirac_module(W)
            modules += [S, build_real_form_module(S), double(build_real_form_module(S))]
        worst = 0.0
        flags = {}
        for module in modules:
            worst = max(worst, _axiom_residual(module))
            flags[f"{module.kind}:{module.dim}"] = module.describe()["flags"]
        # odd grading everywhere
        sign_defect = float(sum(abs(m.flags.s_tau_gamma + 1) for m in modules))
        details = {"flags": flags, "majorana": sig.admits_majorana}
        return CheckOutcome(worst + sign_defect, ctx.tolerance(settings.algebra_tolerance), details)

    def conjugation(self, ctx: CheckContext) -> CheckOutcome:
        modules = [ctx.twisted()]
        modules.append(build_real_form_module(modules[0]))
        worst = 0.0
        samples = ctx.samples(50)
        for _ in range(samples):
            for module in modules:
                B = random_complex(ctx.rng, (module.dim, module.dim))
                psi = random_complex(ctx.rng, (module.dim,))
                worst = max(worst, _max_abs(module.conjugate_endo(module.conjugate_endo(B)) - B))
                worst = max(worst, _max_abs(module.conjugate_section(1j * psi) + 1j * module.conjugate_section(psi)))
                twice = module.conjugate_section(module.conjugate_section(psi))
                worst = max(worst, _max_abs(twice - module.flags.j_squared * psi))
                # (B psi)^cc = B^cc psi^cc
                lhs = module.conjugate_section(B @ psi)
                worst = max(worst, _max_abs(lhs - module.conjugate_endo(B) @ module.conjugate_section(psi)))
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples})

    def pauli_subbundle(self, ctx: CheckContext) -> CheckOutcome:
        E = build_real_form_module(ctx.twisted())
        d = E.dim
        worst = 0.0
        leaked = 0.0
        samples = ctx.samples(50)
        for _ in range(samples):
            D = random_complex(ctx.rng, (d, d))
            D = 0.5 * (D + E.conjugate_endo(D))
            phi = random_complex(ctx.rng, (d, d))
            phi = 0.5 * (phi + E.conjugate_endo(phi))
            z = random_complex(ctx.rng, (d,))
            image = (np.kron(ONE2, D) + np.kron(EPS2, phi)) @ diagonal_embed(z)
            worst = max(worst, _max_abs(image[:d] - image[d:]))
            if not pauli_membership(image, atol=1e-9 * max(1.0, _max_abs(image))):
                worst = max(worst, 1.0)
            # the I2 direction leaves the sub-bundle
            off = np.kron(I2, phi) @ diagonal_embed(z)
            leaked = max(leaked, _max_abs(off[:d] - off[d:]))
        details = {"samples": samples, "i2_leak": leaked}
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), details)

    def stm_projectors(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        if not sig.admits_majorana:
            return CheckOutcome.skip(f"signature {sig.label} admits no Majorana module")
        stm = ctx.stm()
        d = stm.W.dim
        total = np.zeros((d, d), dtype=complex)
        worst = 0.0
        ranks = {}
        for chirality in (1, -1):
            for inner in (1, -1):
                for block in ("nu", "e"):
                    p = stm.projector(chirality, inner, block)
                    worst = max(worst, _max_abs(p @ p - p))
                    total = total + p
                    ranks[f"{chirality:+d}{inner:+d}{block}"] = int(round(np.trace(p).real))
        worst = max(worst, _max_abs(total - np.eye(d)))
        expected = 2 ** (sig.n - 1) * ctx.config.twist.v_r
        worst = max(worst, float(abs(ranks["+1+1nu"] - expected)))
        details = {"ranks": ranks, "expected_nu_right": expected, "dims": stm.dims.model_dump()}
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), details)

    def yukawa(self, ctx: CheckContext) -> CheckOutcome:
        N = 1
        dims = TwistDims(v_r=1, v_l=2 * N, e_r=3 * N, e_l=4 * N)
        g = [random_complex(ctx.rng, (N, N)) for _ in range(3)]
        higgs = random_complex(ctx.rng, (2,))
        phi_lr = yukawa_mapping(g[0], g[1], g[2], higgs)
        phi_e = charged_yukawa_endo(dims, phi_lr)
        grading = np.diag([1.0] * dims.e_r + [-1.0] * dims.e_l)
        worst = _max_abs(phi_e - phi_e.conj().T)
        worst = max(worst, _max_abs(grading @ phi_e @ grading + phi_e))
        worst = max(worst, _max_abs(phi_lr[: 2 * N, :N] - np.kron(g[0], higgs.reshape(2, 1))))
        details = {"shape": list(phi_lr.shape)}
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), details)

    def field_exactness(self, ctx: CheckContext) -> CheckOutcome:
        sig = ctx.sig
        n, band, capacity = sig.n, ctx.band, ctx.capacity
        worst = 0.0
        samples = ctx.samples(5)
        for _ in range(samples):
            f = random_scalar(ctx.rng, n, band, capacity, real=False)
            g = random_scalar(ctx.rng, n, band, capacity, real=False)
            for j in range(n):
                leibniz = (f * g).derive(j) - (f.derive(j) * g + f * g.derive(j))
                worst = max(worst, leibniz.max_abs())
            dd = exterior_derivative(exterior_derivative(FormField.scalar(f)))
            worst = max(worst, dd.max_abs())
            if n >= 3:
                one = FormField.from_list([random_scalar(ctx.rng, n, band, capacity) for _ in range(n)])
                worst = max(worst, exterior_derivative(exterior_derivative(one)).max_abs())
        k = tuple(int(x) for x in ctx.rng.integers(-max(band, 1), max(band, 1) + 1, size=n))
        wave = FourierField.plane_wave(k, 1.0, capacity)
        for j in range(n):
            worst = max(worst, (wave.derive(j) - (1j * k[j]) * wave).max_abs())
        return CheckOutcome(worst, ctx.tolerance(settings.algebra_tolerance), {"samples": samples, "k": list(k)})

    def field_capacity(self, ctx: CheckContext) -> CheckOutcome:
        n = ctx.sig.n
        f = random_field(ctx.rng, n, 2, (), 3)
        g = random_field(ctx.rng, n, 2, (), 3)
        try:
            f * g
        except CapacityExceeded as e:
            return CheckOutcome(0.0, ctx.tolerance(0.0), {"diagnostic": str(e)})
        return CheckOutcome(1.0, ctx.tolerance(0.0), {"diagnostic": "product of degree 4 accepted at capacity 3"},
                            message="capacity guard did not trigger")


def get_clifford_checks_service() -> CliffordChecksService:
    """Dependency injection helper"""
    return CliffordChecksService()
