"""
Seeded random admissible data for the checks.

Every check owns a generator derived from (master seed, check id), so results
do not depend on execution order or thread count.
"""
from functools import lru_cache
from typing import List, Optional, Tuple
import logging
import zlib

import numpy as np

from dirac_verify.core import clifford_fiber as cf
from dirac_verify.core.fourier_fields import FourierField, FormField
from dirac_verify.core.dirac_ops import ConnectionSpec, DiracOperatorSpec, DYMOperator, dym_op
from dirac_verify.core.graded_modules import MassBlockSpec, ModuleDescriptor, STMModule
from dirac_verify.models import Hermiticity

logger = logging.getLogger(__name__)


def check_rng(seed: int, check_id: str) -> np.random.Generator:
    """Independent generator for one check"""
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(check_id.encode("utf-8"))]))


def random_complex(rng: np.random.Generator, shape: Tuple[int, ...], scale: float = 1.0) -> np.ndarray:
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_real_symmetric(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((d, d))
    return scale * (a + a.T) / 2.0


def random_field(
    rng: np.random.Generator,
    n: int,
    band: int,
    value_shape: Tuple[int, ...],
    capacity: int,
    scale: float = 1.0,
    real: bool = False,
    axes: Optional[int] = None,
) -> FourierField:
    """
    Band-limited field with modes |k_i| <= band and O(scale) values.

    Args:
        real: make the field real-valued pointwise (entrywise)
        axes: number of leading coordinates the field depends on (all by default)
    """
    axes = n if axes is None else min(axes, n)
    grid = (2 * band + 1,) * axes + (1,) * (n - axes)
    count = int(np.prod(grid))
    coefficients = random_complex(rng, grid + tuple(value_shape), scale / np.sqrt(count))
    field = FourierField(coefficients, n, capacity)
    if real:
        field = 0.5 * (field + field.conjugate())
    return field


def random_scalar(rng: np.random.Generator, n: int, band: int, capacity: int, real: bool = True) -> FourierField:
    return random_field(rng, n, band, (), capacity, real=real)


def random_section(rng: np.random.Generator, module: ModuleDescriptor, band: int, capacity: int,
                   axes: Optional[int] = None) -> FourierField:
    return random_field(rng, module.sig.n, band, (module.dim,), capacity, axes=axes)


def random_endo(rng: np.random.Generator, module: ModuleDescriptor, band: int, capacity: int,
                scale: float = 1.0) -> FourierField:
    return random_field(rng, module.sig.n, band, (module.dim, module.dim), capacity, scale)


@lru_cache(maxsize=64)
def _blade_pairs(module: ModuleDescriptor) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """(Gamma_I, Gamma_I^-1) for every blade of the module's generators"""
    sig = module.sig
    pairs = []
    for blade in cf.blades(sig.n):
        forward = cf.blade_product(module.gammas, blade)
        # (gamma^k)^-1 = epsilon eta_k gamma^k
        scale = np.prod([sig.epsilon * sig.eta[k] for k in blade]) if blade else 1.0
        inverse = scale * cf.blade_product(module.gammas, tuple(reversed(blade)))
        pairs.append((forward, inverse))
    return tuple(pairs)


def clifford_average(module: ModuleDescriptor, B):
    """
    Projection onto the commutant of the Clifford action.

    Averages Gamma_I B Gamma_I^-1 over all blades; accepts matrices and fields.
    """
    total = None
    for forward, inverse in _blade_pairs(module):
        term = forward @ B @ inverse
        total = term if total is None else total + term
    return total * (1.0 / 2 ** module.sig.n)


def parity_part(module: ModuleDescriptor, B, parity: int):
    """(B + parity tau B tau) / 2: even part for +1, odd part for -1"""
    return 0.5 * (B + parity * (module.tau @ B @ module.tau))


def hermiticity_branch(B, branch: Hermiticity):
    """Hermitian or anti-Hermitian part, pointwise"""
    adjoint = B.adjoint() if isinstance(B, FourierField) else np.conj(np.swapaxes(B, -1, -2))
    if branch == Hermiticity.HERMITIAN:
        return 0.5 * (B + adjoint)
    return 0.5 * (B - adjoint)


def random_end_gamma(
    rng: np.random.Generator,
    module: ModuleDescriptor,
    band: int,
    capacity: int,
    parity: Optional[int] = None,
    scale: float = 1.0,
) -> FourierField:
    """Random endomorphism field commuting with gamma, optionally of fixed tau-parity"""
    endo = clifford_average(module, random_endo(rng, module, band, capacity, scale))
    if parity is not None:
        endo = parity_part(module, endo, parity)
    return endo


def random_clifford_potential(
    rng: np.random.Generator,
    module: ModuleDescriptor,
    band: int,
    capacity: int,
    anti_hermitian: bool = True,
    scale: float = 1.0,
) -> FormField:
    """One-form whose components commute with gamma (a Clifford connection potential)"""
    components: List[FourierField] = []
    for _ in range(module.sig.n):
        a = random_end_gamma(rng, module, band, capacity, scale=scale)
        if anti_hermitian:
            a = hermiticity_branch(a, Hermiticity.ANTI_HERMITIAN)
        components.append(a)
    return FormField.from_list(components)


def random_twist_potential(
    rng: np.random.Generator,
    module: ModuleDescriptor,
    band: int,
    capacity: int,
    mask: Optional[np.ndarray] = None,
    scale: float = 1.0,
    constant: bool = False,
    axes: Optional[int] = None,
) -> FormField:
    """
    Anti-Hermitian potential id_Lambda (x) a_k(x) acting on the twist only.

    Args:
        mask: optional twist projector; a_k is compressed to its range
        constant: draw constant (degree 0) components
        axes: number of leading coordinates the components depend on
    """
    w = module.twist_dim
    eye = np.eye(2 ** module.sig.n, dtype=complex)
    components = []
    for _ in range(module.sig.n):
        a = random_field(rng, module.sig.n, 0 if constant else band, (w, w), capacity, scale, axes=axes)
        a = hermiticity_branch(a, Hermiticity.ANTI_HERMITIAN)
        if mask is not None:
            a = mask @ a @ mask
        components.append(a.kron_left(eye))
    return FormField.from_list(components)


def random_end_gamma_form(
    rng: np.random.Generator,
    module: ModuleDescriptor,
    band: int,
    capacity: int,
    parity: Optional[int] = None,
) -> FormField:
    return FormField.from_list(
        [random_end_gamma(rng, module, band, capacity, parity) for _ in range(module.sig.n)]
    )


def anticommuting_part(module: ModuleDescriptor, B):
    """Projection onto endomorphisms anticommuting with every gamma^k: signed blade average"""
    total = None
    for blade, (forward, inverse) in zip(cf.blades(module.sig.n), _blade_pairs(module)):
        term = (-1) ** len(blade) * (forward @ B @ inverse)
        total = term if total is None else total + term
    return total * (1.0 / 2 ** module.sig.n)


def random_masses(rng: np.random.Generator, v: int, scale: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Constant real symmetric (m_D, m_M) neutrino mass pair"""
    return random_real_symmetric(rng, v, scale), random_real_symmetric(rng, v, scale)


def random_dym(
    rng: np.random.Generator,
    stm: STMModule,
    band: int,
    capacity: int,
    hermiticity: Hermiticity = Hermiticity.HERMITIAN,
    mass_scale: float = 1.0,
    potential_scale: float = 1.0,
    flat: bool = False,
    axes: Optional[int] = None,
) -> DYMOperator:
    """
    DYM operator with random constant neutrino masses, a random charged block
    phi_e of the given Hermiticity and a partially flat potential on the charged block.

    Args:
        band: band budget of phi_e and the potential (0 draws constant data)
        flat: use a zero potential (then only phi_e carries x-dependence)
        axes: number of leading coordinates phi_e and the potential depend on
    """
    dims = stm.dims
    n = stm.W.sig.n
    v, e = dims.v, dims.e
    m_dirac, m_majorana = random_masses(rng, v, mass_scale)
    phi_e = random_field(rng, n, band, (e, e), capacity, mass_scale, axes=axes)
    phi_e = hermiticity_branch(phi_e, hermiticity)
    masses = MassBlockSpec(m_dirac, m_majorana, phi_e)
    if flat:
        potential = FormField.zeros(n, 1, (stm.W.dim, stm.W.dim), capacity)
    else:
        mask = np.diag([0.0] * v + [1.0] * e).astype(complex)
        potential = random_twist_potential(rng, stm.W, band, capacity, mask, potential_scale,
                                           constant=band == 0, axes=axes)
    return dym_op(stm, potential, masses)


def random_operator(
    rng: np.random.Generator,
    module: ModuleDescriptor,
    band: int,
    capacity: int,
    scale: float = 0.5,
) -> DiracOperatorSpec:
    """Dirac-type operator with a random Clifford connection and a random zero-order part"""
    potential = random_clifford_potential(rng, module, band, capacity, scale=scale)
    phi = random_endo(rng, module, band, capacity, scale)
    return DiracOperatorSpec(ConnectionSpec(module, potential), phi)
