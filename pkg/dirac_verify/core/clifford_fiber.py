"""
Pointwise Clifford and exterior algebra on the Grassmann fiber.

The fiber is the complexified exterior algebra over R^n in the orthonormal
basis e^1..e^n, with blades ordered by grade and then lexicographically.
Indices are 0-based internally.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np

from dirac_verify.models import Signature

logger = logging.getLogger(__name__)

Blade = Tuple[int, ...]


@lru_cache(maxsize=None)
def blades(n: int) -> Tuple[Blade, ...]:
    """All 2^n blades, sorted by grade then lexicographically"""
    return tuple(b for k in range(n + 1) for b in combinations(range(n), k))


@lru_cache(maxsize=None)
def blade_index(n: int) -> Dict[Blade, int]:
    return {b: i for i, b in enumerate(blades(n))}


def permutation_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation sorting a sequence of distinct integers"""
    sign = 1
    items = list(sequence)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class Multivector:
    """Finitely supported map from increasing blades to complex coefficients"""
    coefficients: Dict[Blade, complex] = field(default_factory=dict)

    @classmethod
    def from_vector(cls, n: int, vector: np.ndarray, cutoff: float = 0.0) -> "Multivector":
        return cls({b: complex(vector[i]) for i, b in enumerate(blades(n)) if abs(vector[i]) > cutoff})

    @classmethod
    def blade(cls, indices: Iterable[int], value: complex = 1.0) -> "Multivector":
        key = tuple(indices)
        if list(key) != sorted(set(key)):
            raise ValueError(f"blade indices must be strictly increasing, got {key}")
        return cls({key: complex(value)})

    def to_vector(self, n: int) -> np.ndarray:
        index = blade_index(n)
        vector = np.zeros(2 ** n, dtype=complex)
        for b, value in self.coefficients.items():
            if b not in index:
                raise ValueError(f"blade {b} does not live in dimension {n}")
            vector[index[b]] += value
        return vector

    def is_close(self, other: "Multivector", n: int, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_vector(n), other.to_vector(n), atol=atol, rtol=0.0))


@dataclass(frozen=True)
class CovectorValuedEndo:
    """
    k-form with endomorphism coefficients.

    Only increasing index tuples are stored; antisymmetry is structural.
    """
    degree: int
    components: Dict[Blade, np.ndarray]

    def component(self, *indices: int):
        """Component at arbitrary index order, signed by antisymmetry"""
        if len(set(indices)) < len(indices):
            sample = next(iter(self.components.values()))
            return np.zeros_like(sample)
        key = tuple(sorted(indices))
        return permutation_sign(indices) * self.components[key]


@lru_cache(maxsize=None)
def exterior_matrix(n: int, k: int) -> np.ndarray:
    """ext(e^k) in the blade basis"""
    index = blade_index(n)
    matrix = np.zeros((2 ** n, 2 ** n))
    for b in blades(n):
        if k in b:
            continue
        sign = (-1) ** sum(1 for j in b if j < k)
        target = tuple(sorted(b + (k,)))
        matrix[index[target], index[b]] = sign
    return matrix


@lru_cache(maxsize=None)
def interior_matrix(sig: Signature, k: int) -> np.ndarray:
    """Metric contraction int_g(e^k) in the blade basis"""
    n = sig.n
    index = blade_index(n)
    matrix = np.zeros((2 ** n, 2 ** n))
    for b in blades(n):
        if k not in b:
            continue
        position = b.index(k)
        target = b[:position] + b[position + 1:]
        matrix[index[target], index[b]] = sig.eta[k] * (-1) ** position
    return matrix


@lru_cache(maxsize=None)
def _gamma_stack(sig: Signature) -> np.ndarray:
    stack = np.array(
        [sig.epsilon * interior_matrix(sig, k) + exterior_matrix(sig.n, k) for k in range(sig.n)],
        dtype=complex,
    )
    stack.setflags(write=False)
    return stack


def gamma_matrices(sig: Signature) -> np.ndarray:
    """Stack of gamma(e^k) = epsilon int + ext, shape (n, 2^n, 2^n)"""
    return _gamma_stack(sig)


def _check_covector(sig: Signature, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (sig.n,):
        raise ValueError(f"covector must have {sig.n} components, got shape {alpha.shape}")
    return alpha


def gamma_of(sig: Signature, alpha) -> np.ndarray:
    """Matrix of gamma(alpha) for a covector given by its components"""
    alpha = _check_covector(sig, alpha)
    return np.tensordot(alpha, gamma_matrices(sig), axes=1)


def gamma_apply(sig: Signature, alpha, omega: Multivector) -> Multivector:
    """epsilon int_g(alpha) omega + ext(alpha) omega"""
    return Multivector.from_vector(sig.n, gamma_of(sig, alpha) @ omega.to_vector(sig.n))


def blade_product(gammas: np.ndarray, blade: Blade) -> np.ndarray:
    """Ordered product gamma^{i1} ... gamma^{ik}; identity for the empty blade"""
    result = np.eye(gammas.shape[-1], dtype=complex)
    for k in blade:
        result = result @ gammas[k]
    return result


def quantize(sig: Signature, omega: Multivector) -> np.ndarray:
    """Chevalley quantization: blades lifted to ordered gamma products"""
    gammas = gamma_matrices(sig)
    result = np.zeros((2 ** sig.n, 2 ** sig.n), dtype=complex)
    for b, value in omega.coefficients.items():
        result += value * blade_product(gammas, b)
    return result


def symbol_map(sig: Signature, element: np.ndarray) -> Multivector:
    """Symbol of a Clifford element: its action on the vacuum blade"""
    element = np.asarray(element)
    if element.shape != (2 ** sig.n, 2 ** sig.n):
        raise ValueError(f"expected a {2 ** sig.n}x{2 ** sig.n} matrix, got {element.shape}")
    return Multivector.from_vector(sig.n, element[:, 0])


def quantize_form(gammas: np.ndarray, components: Mapping[Blade, object], chi: Optional[np.ndarray] = None):
    """
    delta_gamma of a form with endomorphism (or endomorphism-field) coefficients.

    Args:
        gammas: Clifford generators acting on the fiber, shape (n, d, d)
        components: increasing blade -> coefficient (matrix or FourierField)
        chi: optional endomorphism composed on the right

    Returns:
        sum over blades of gamma_I composed with the coefficient
    """
    total = None
    for b, value in components.items():
        term = blade_product(gammas, b) @ value
        total = term if total is None else total + term
    if total is None:
        total = np.zeros(gammas.shape[1:], dtype=complex)
    if chi is not None:
        total = total @ chi
    return total


def volume_blade(n: int) -> Blade:
    return tuple(range(n))


def chirality_prefactor(sig: Signature) -> complex:
    """Principal branch of sqrt((-1)^m): 1 for even m, i for odd m"""
    return 1.0 if sig.chirality_exponent % 2 == 0 else 1j


def chirality(sig: Signature) -> np.ndarray:
    """tau_M = sqrt((-1)^m) delta_gamma(dvol)"""
    return chirality_prefactor(sig) * blade_product(gamma_matrices(sig), volume_blade(sig.n))


def theta_components(sig: Signature, gammas: np.ndarray) -> Dict[Blade, np.ndarray]:
    """Canonical one-form (epsilon/n) e^k (x) gamma(e_k) on any Clifford module"""
    return {(k,): (sig.epsilon / sig.n) * sig.eta[k] * gammas[k] for k in range(sig.n)}


def canonical_one_form(sig: Signature) -> CovectorValuedEndo:
    return CovectorValuedEndo(1, theta_components(sig, gamma_matrices(sig)))


def ext_theta(sig: Signature, gammas: np.ndarray, phi) -> Dict[Blade, object]:
    """Theta wedge Phi: components Theta_k composed with Phi"""
    return {b: value @ phi for b, value in theta_components(sig, gammas).items()}


def quantized_trace(gammas: np.ndarray, components: Mapping[Blade, np.ndarray]) -> complex:
    """tr_gamma(x) = tr(delta_gamma(x))"""
    return complex(np.trace(quantize_form(gammas, components)))


@lru_cache(maxsize=None)
def _opposite_stack(sig: Signature) -> np.ndarray:
    gammas = gamma_matrices(sig)
    dim = 2 ** sig.n
    index = blade_index(sig.n)
    stack = np.zeros((sig.n, dim, dim), dtype=complex)
    for k in range(sig.n):
        # Column I is the symbol of gamma_I gamma^k (right multiplication by e^k)
        for b in blades(sig.n):
            stack[k][:, index[b]] = blade_product(gammas, b)[:, index[(k,)]]
    stack.setflags(write=False)
    return stack


def opposite_gammas(sig: Signature) -> np.ndarray:
    """Right Clifford multiplication transported to the Grassmann fiber, shape (n, 2^n, 2^n)"""
    return _opposite_stack(sig)


def opposite_action(sig: Signature, alpha) -> np.ndarray:
    alpha = _check_covector(sig, alpha)
    return np.tensordot(alpha, opposite_gammas(sig), axes=1)


def grade_involution(n: int) -> np.ndarray:
    """(-1)^grade on blades"""
    return np.diag([(-1.0) ** len(b) for b in blades(n)]).astype(complex)


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a
