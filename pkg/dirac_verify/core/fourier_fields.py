"""
Band-limited fields on the flat torus [0, 2pi)^n.

A FourierField stores centered Fourier coefficients of shape
(2D_1+1, ..., 2D_n+1) + value_shape, where D_i is the field degree along x_i
(max |k_i| over the support) and value_shape is () for scalars, (d,) for
sections and (d, d) for endomorphism fields. A field that does not depend on
x_i keeps a length-1 axis there. Derivatives, products and integrals are exact.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np
import scipy.fft

from dirac_verify.config import settings
from dirac_verify.core.clifford_fiber import Blade, permutation_sign
from dirac_verify.models import Signature

logger = logging.getLogger(__name__)

Degrees = Tuple[int, ...]


class CapacityExceeded(Exception):
    """A product would exceed the band limit; lower the input band K"""


def _grid_axes(n: int) -> Tuple[int, ...]:
    return tuple(range(n))


def _as_degrees(degree: Union[int, Sequence[int]], n: int) -> Degrees:
    if isinstance(degree, (int, np.integer)):
        return (int(degree),) * n
    return tuple(int(d) for d in degree)


def _joint_degrees(*degrees: Degrees) -> Degrees:
    return tuple(max(axis) for axis in zip(*degrees))


def _embed(coefficients: np.ndarray, n: int, degrees: Degrees) -> np.ndarray:
    """Zero-pad centered coefficients to larger per-axis degrees"""
    current = tuple((s - 1) // 2 for s in coefficients.shape[:n])
    if degrees == current:
        return coefficients
    width = [(d - c, d - c) for d, c in zip(degrees, current)] + [(0, 0)] * (coefficients.ndim - n)
    return np.pad(coefficients, width)


def _wrap_index(degree: int, size: int) -> np.ndarray:
    return (np.arange(2 * degree + 1) - degree) % size


def _pointwise(a: np.ndarray, b: np.ndarray, rank_a: int, rank_b: int) -> np.ndarray:
    """Fiberwise product of grid values"""
    if rank_a == 0 or rank_b == 0:
        if rank_a == 0:
            a = a.reshape(a.shape + (1,) * rank_b)
        else:
            b = b.reshape(b.shape + (1,) * rank_a)
        return a * b
    if rank_a == 2 and rank_b == 2:
        return np.matmul(a, b)
    if rank_a == 2 and rank_b == 1:
        return np.einsum("...ij,...j->...i", a, b)
    if rank_a == 1 and rank_b == 1:
        return np.einsum("...i,...i->...", a, b)
    if rank_a == 1 and rank_b == 2:
        return np.einsum("...i,...ij->...j", a, b)
    raise ValueError(f"unsupported fiber ranks for a product: {rank_a}, {rank_b}")


@dataclass(frozen=True, eq=False)
class FourierField:
    """Truncated Fourier series with fiber values"""

    coefficients: np.ndarray
    n: int
    capacity: int

    # Lets ndarray @ field dispatch to __rmatmul__
    __array_ufunc__ = None

    def __post_init__(self):
        shape = self.coefficients.shape
        if len(shape) < self.n or any(s % 2 == 0 for s in shape[: self.n]):
            raise ValueError(f"coefficient array of shape {shape} is not a centered {self.n}-dim mode grid")
        if self.degree > self.capacity:
            raise CapacityExceeded(f"field degree {self.degree} exceeds capacity {self.capacity}")

    # ----- construction -------------------------------------------------

    @classmethod
    def zeros(cls, n: int, value_shape: Tuple[int, ...] = (), capacity: int = 6,
              degree: Union[int, Sequence[int]] = 0) -> "FourierField":
        grid = tuple(2 * d + 1 for d in _as_degrees(degree, n))
        return cls(np.zeros(grid + tuple(value_shape), dtype=complex), n, capacity)

    @classmethod
    def constant(cls, value, n: int, capacity: int = 6) -> "FourierField":
        value = np.asarray(value, dtype=complex)
        return cls(value.reshape((1,) * n + value.shape).copy(), n, capacity)

    @classmethod
    def from_modes(
        cls,
        modes: Mapping[Tuple[int, ...], object],
        n: int,
        capacity: int = 6,
        value_shape: Optional[Tuple[int, ...]] = None,
    ) -> "FourierField":
        """Build a field from a {k: value} map"""
        if not modes:
            return cls.zeros(n, value_shape or (), capacity)
        values = {tuple(int(x) for x in k): np.asarray(v, dtype=complex) for k, v in modes.items()}
        shapes = {v.shape for v in values.values()}
        if len(shapes) != 1:
            raise ValueError(f"mode values have inconsistent shapes: {sorted(shapes)}")
        shape = value_shape if value_shape is not None else shapes.pop()
        for k in values:
            if len(k) != n:
                raise ValueError(f"mode {k} does not have {n} components")
        degrees = tuple(max(abs(k[i]) for k in values) for i in range(n))
        coefficients = np.zeros(tuple(2 * d + 1 for d in degrees) + tuple(shape), dtype=complex)
        for k, value in values.items():
            coefficients[tuple(x + d for x, d in zip(k, degrees))] += value
        return cls(coefficients, n, capacity)

    @classmethod
    def plane_wave(cls, k: Sequence[int], value, capacity: int = 6) -> "FourierField":
        return cls.from_modes({tuple(k): value}, len(k), capacity)

    def _like(self, coefficients: np.ndarray, capacity: Optional[int] = None) -> "FourierField":
        return FourierField(coefficients, self.n, self.capacity if capacity is None else capacity)

    # ----- shape --------------------------------------------------------

    @property
    def degrees(self) -> Degrees:
        """Degree along each torus axis"""
        return tuple((s - 1) // 2 for s in self.coefficients.shape[: self.n])

    @property
    def degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def value_shape(self) -> Tuple[int, ...]:
        return self.coefficients.shape[self.n:]

    @property
    def rank(self) -> int:
        return len(self.value_shape)

    def padded(self, degree: Union[int, Sequence[int]]) -> np.ndarray:
        """Coefficients zero-padded to a common degree (an int pads every axis)"""
        degrees = _as_degrees(degree, self.n)
        if any(d < own for d, own in zip(degrees, self.degrees)):
            raise ValueError(f"cannot pad degrees {self.degrees} down to {degrees}")
        return _embed(self.coefficients, self.n, degrees)

    def mode(self, k: Sequence[int]) -> np.ndarray:
        """Coefficient at mode k (zero outside the support)"""
        degrees = self.degrees
        if any(abs(x) > d for x, d in zip(k, degrees)):
            return np.zeros(self.value_shape, dtype=complex)
        return self.coefficients[tuple(x + d for x, d in zip(k, degrees))]

    def zero_mode(self) -> np.ndarray:
        return self.mode((0,) * self.n)

    def modes(self) -> Iterable[Tuple[Tuple[int, ...], np.ndarray]]:
        """Nonzero (k, value) pairs"""
        degrees = self.degrees
        for index in np.ndindex(*self.coefficients.shape[: self.n]):
            value = self.coefficients[index]
            if np.any(value != 0):
                yield tuple(i - d for i, d in zip(index, degrees)), value

    # ----- linear structure ---------------------------------------------

    def _aligned(self, other: "FourierField") -> Tuple[np.ndarray, np.ndarray]:
        if other.n != self.n:
            raise ValueError(f"fields live on tori of different dimension: {self.n} vs {other.n}")
        degrees = _joint_degrees(self.degrees, other.degrees)
        return self.padded(degrees), other.padded(degrees)

    def __add__(self, other):
        if isinstance(other, FourierField):
            a, b = self._aligned(other)
            return self._like(a + b, min(self.capacity, other.capacity))
        if np.isscalar(other):
            if other == 0:
                return self
            return self + self._scalar_constant(other)
        return self + FourierField.constant(other, self.n, self.capacity)

    def _scalar_constant(self, value) -> "FourierField":
        """A number as a constant field of this value shape: value * identity on matrix fibers"""
        if self.rank == 0:
            return FourierField.constant(value, self.n, self.capacity)
        if self.rank == 2 and self.value_shape[0] == self.value_shape[1]:
            return FourierField.constant(value * np.eye(self.value_shape[0]), self.n, self.capacity)
        raise ValueError(f"cannot add a number to a field with values of shape {self.value_shape}")

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._like(-self.coefficients)

    def __mul__(self, scalar):
        if isinstance(scalar, FourierField):
            return product(self, scalar)
        return self._like(self.coefficients * scalar)

    def __rmul__(self, scalar):
        return self._like(scalar * self.coefficients)

    def __truediv__(self, scalar):
        return self._like(self.coefficients / scalar)

    def __matmul__(self, other):
        if isinstance(other, FourierField):
            return product(self, other)
        matrix = np.asarray(other)
        if self.rank == 2:
            return self._like(self.coefficients @ matrix)
        if self.rank == 1:
            return self._like(np.einsum("...i,ij->...j", self.coefficients, matrix))
        return self._like(np.multiply.outer(self.coefficients, matrix))

    def __rmatmul__(self, other):
        matrix = np.asarray(other)
        if self.rank == 2:
            return self._like(matrix @ self.coefficients)
        if self.rank == 1:
            return self._like(np.einsum("ij,...j->...i", matrix, self.coefficients))
        return self._like(np.multiply.outer(self.coefficients, matrix))

    # ----- calculus and fiber operations --------------------------------

    def derive(self, j: int) -> "FourierField":
        """Exact partial derivative along x_j"""
        d = self.degrees[j]
        k = np.arange(-d, d + 1)
        shape = [1] * self.coefficients.ndim
        shape[j] = 2 * d + 1
        return self._like(self.coefficients * (1j * k).reshape(shape))

    def conjugate(self) -> "FourierField":
        """Pointwise complex conjugate: mode k becomes conj(c_{-k})"""
        flipped = self.coefficients[(slice(None, None, -1),) * self.n]
        return self._like(np.conj(flipped))

    def adjoint(self) -> "FourierField":
        """Pointwise conjugate transpose of a matrix field"""
        return self._like(np.swapaxes(self.conjugate().coefficients, -1, -2))

    def transpose(self) -> "FourierField":
        return self._like(np.swapaxes(self.coefficients, -1, -2))

    def trace(self) -> "FourierField":
        return self._like(np.trace(self.coefficients, axis1=-2, axis2=-1))

    def integrate(self):
        """(2pi)^n times the zero mode"""
        value = (2 * np.pi) ** self.n * self.zero_mode()
        return complex(value) if self.rank == 0 else value

    def kron(self, matrix: np.ndarray) -> "FourierField":
        """Pointwise B(x) (x) M for a constant matrix M"""
        matrix = np.asarray(matrix)
        c = self.coefficients
        d1, d2 = c.shape[-2:]
        e1, e2 = matrix.shape
        out = np.einsum("...ij,kl->...ikjl", c, matrix).reshape(c.shape[:-2] + (d1 * e1, d2 * e2))
        return self._like(out)

    def kron_left(self, matrix: np.ndarray) -> "FourierField":
        """Pointwise M (x) B(x) for a constant matrix M"""
        matrix = np.asarray(matrix)
        c = self.coefficients
        d1, d2 = c.shape[-2:]
        e1, e2 = matrix.shape
        out = np.einsum("kl,...ij->...kilj", matrix, c).reshape(c.shape[:-2] + (e1 * d1, e2 * d2))
        return self._like(out)

    def sample(self, size: int) -> np.ndarray:
        """Values on the uniform grid x_j = 2 pi j / size"""
        if size < 2 * self.degree + 1:
            raise ValueError(f"grid of size {size} aliases a field of degree {self.degree}")
        grid = np.zeros((size,) * self.n + self.value_shape, dtype=complex)
        grid[np.ix_(*[_wrap_index(d, size) for d in self.degrees])] = self.coefficients
        return scipy.fft.ifftn(grid, axes=_grid_axes(self.n), norm="forward", workers=settings.threads)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coefficients))) if self.coefficients.size else 0.0

    def l2_norm(self) -> float:
        """sqrt of the integral of |f|^2 (Frobenius on the fiber)"""
        return float(np.sqrt((2 * np.pi) ** self.n * np.sum(np.abs(self.coefficients) ** 2)))

    def is_constant(self, atol: float = 0.0) -> bool:
        zero = self.zero_mode()
        rest = self - FourierField.constant(zero, self.n, self.capacity)
        return rest.max_abs() <= atol

    def map_values(self, func: Callable[[np.ndarray], np.ndarray]) -> "FourierField":
        """Apply a linear fiber map mode by mode"""
        return self._like(func(self.coefficients))

    @staticmethod
    def block(rows: Sequence[Sequence[Optional["FourierField"]]], n: int, capacity: int,
              sizes: Sequence[int]) -> "FourierField":
        """Assemble a block matrix field; None entries are zero blocks of the given sizes"""
        present = [f for row in rows for f in row if f is not None]
        degrees = _joint_degrees(*[f.degrees for f in present]) if present else (0,) * n
        grid = tuple(2 * d + 1 for d in degrees)
        assembled = []
        for i, row in enumerate(rows):
            parts = []
            for j, entry in enumerate(row):
                if entry is None:
                    parts.append(np.zeros(grid + (sizes[i], sizes[j]), dtype=complex))
                else:
                    parts.append(entry.padded(degrees))
            assembled.append(np.concatenate(parts, axis=-1))
        return FourierField(np.concatenate(assembled, axis=-2), n, capacity)

    def sub_block(self, rows: slice, cols: slice) -> "FourierField":
        return self._like(self.coefficients[..., rows, cols])

    @staticmethod
    def stack(parts: Sequence["FourierField"]) -> "FourierField":
        """Concatenate section fields along the fiber"""
        degrees = _joint_degrees(*[p.degrees for p in parts])
        return parts[0]._like(np.concatenate([p.padded(degrees) for p in parts], axis=-1),
                              min(p.capacity for p in parts))

    def segment(self, part: slice) -> "FourierField":
        return self._like(self.coefficients[..., part])


def derive(f: FourierField, j: int) -> FourierField:
    return f.derive(j)


def product(f: FourierField, g: FourierField) -> FourierField:
    """
    Exact pointwise product (convolution of coefficients).

    Raises:
        CapacityExceeded: when deg(f) + deg(g) exceeds the band limit
    """
    if f.n != g.n:
        raise ValueError(f"fields live on tori of different dimension: {f.n} vs {g.n}")
    capacity = min(f.capacity, g.capacity)
    degrees = tuple(a + b for a, b in zip(f.degrees, g.degrees))
    if max(degrees, default=0) > capacity:
        raise CapacityExceeded(
            f"product of degrees {f.degree} and {g.degree} exceeds capacity {capacity}"
        )
    if not any(degrees):
        values = _pointwise(f.coefficients, g.coefficients, f.rank, g.rank)
        return FourierField(values, f.n, capacity)
    sizes = tuple(2 * d + 1 for d in degrees)
    axes = _grid_axes(f.n)
    values = []
    for field in (f, g):
        grid = np.zeros(sizes + field.value_shape, dtype=complex)
        grid[np.ix_(*[_wrap_index(d, s) for d, s in zip(field.degrees, sizes)])] = field.coefficients
        values.append(scipy.fft.ifftn(grid, axes=axes, norm="forward", workers=settings.threads))
    pointwise = _pointwise(values[0], values[1], f.rank, g.rank)
    spectrum = scipy.fft.fftn(pointwise, axes=axes, norm="forward", workers=settings.threads)
    coefficients = spectrum[np.ix_(*[_wrap_index(d, s) for d, s in zip(degrees, sizes)])]
    return FourierField(np.ascontiguousarray(coefficients), f.n, capacity)


def integrate(f: FourierField):
    return f.integrate()


def l2_pairing(psi: FourierField, phi: FourierField, form: Optional[np.ndarray] = None) -> complex:
    """Integral of <psi(x), G phi(x)> with G the Hermitian form (identity by default)"""
    a, b = psi._aligned(phi)
    if form is None:
        value = np.einsum("...i,...i->", np.conj(a), b)
    else:
        value = np.einsum("...i,ij,...j->", np.conj(a), form, b)
    return complex((2 * np.pi) ** psi.n * value)


def trace_pairing(f: FourierField, g: FourierField) -> complex:
    """Integral of tr(f(x) g(x)) without forming the product"""
    a, b = f._aligned(g)
    b = b[(slice(None, None, -1),) * f.n]
    if f.rank == 0:
        value = np.sum(a * b)
    else:
        value = np.einsum("...ij,...ji->", a, b)
    return complex((2 * np.pi) ** f.n * value)


@dataclass(frozen=True, eq=False)
class FormField:
    """Differential k-form with field coefficients on increasing index tuples"""

    degree: int
    n: int
    components: Dict[Blade, FourierField]

    def __post_init__(self):
        expected = set(combinations(range(self.n), self.degree))
        if set(self.components) != expected:
            raise ValueError(f"degree-{self.degree} form needs exactly the increasing index tuples")

    @classmethod
    def scalar(cls, field: FourierField) -> "FormField":
        return cls(0, field.n, {(): field})

    @classmethod
    def from_list(cls, fields: Sequence[FourierField]) -> "FormField":
        return cls(1, len(fields), {(k,): f for k, f in enumerate(fields)})

    @classmethod
    def zeros(cls, n: int, degree: int, value_shape: Tuple[int, ...], capacity: int) -> "FormField":
        zero = FourierField.zeros(n, value_shape, capacity)
        return cls(degree, n, {b: zero for b in combinations(range(n), degree)})

    def component(self, *indices: int) -> FourierField:
        """Component at any index order, signed by antisymmetry"""
        if len(set(indices)) < len(indices):
            return 0 * next(iter(self.components.values()))
        return permutation_sign(indices) * self.components[tuple(sorted(indices))]

    def __getitem__(self, k: int) -> FourierField:
        return self.components[(k,)]

    def as_list(self) -> list:
        return [self.components[(k,)] for k in range(self.n)]

    def map(self, func: Callable[[FourierField], FourierField]) -> "FormField":
        return FormField(self.degree, self.n, {b: func(f) for b, f in self.components.items()})

    def _combine(self, other: "FormField", op) -> "FormField":
        if (self.degree, self.n) != (other.degree, other.n):
            raise ValueError("forms of different degree or dimension cannot be combined")
        return FormField(self.degree, self.n, {b: op(f, other.components[b]) for b, f in self.components.items()})

    def __add__(self, other: "FormField") -> "FormField":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "FormField") -> "FormField":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "FormField":
        return self.map(lambda f: -f)

    def __mul__(self, scalar) -> "FormField":
        return self.map(lambda f: f * scalar)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max(f.max_abs() for f in self.components.values())


def wedge(a: FormField, b: FormField) -> FormField:
    """Wedge product with fiberwise (noncommutative) coefficient products"""
    if a.n != b.n:
        raise ValueError("forms live on tori of different dimension")
    degree = a.degree + b.degree
    if degree > a.n:
        raise ValueError(f"wedge of degrees {a.degree} and {b.degree} exceeds dimension {a.n}")
    components = {}
    for J in combinations(range(a.n), degree):
        total = None
        for S in combinations(J, a.degree):
            rest = tuple(j for j in J if j not in S)
            term = permutation_sign(S + rest) * product(a.components[S], b.components[rest])
            total = term if total is None else total + term
        components[J] = total
    return FormField(degree, a.n, components)


def exterior_derivative(form: FormField) -> FormField:
    components = {}
    for J in combinations(range(form.n), form.degree + 1):
        total = None
        for t, j in enumerate(J):
            rest = J[:t] + J[t + 1:]
            term = (-1) ** t * form.components[rest].derive(j)
            total = term if total is None else total + term
        components[J] = total
    return FormField(form.degree + 1, form.n, components)


def covariant_exterior(potential: FormField, form: FormField) -> FormField:
    """d_A acting on End-valued forms: d w + A^w - (-1)^p w^A"""
    sign = (-1) ** form.degree
    return exterior_derivative(form) + wedge(potential, form) - wedge(form, potential) * sign


def ev_g(sig: Signature, a: FormField, b: Optional[FormField] = None) -> FourierField:
    """Metric contraction sum_k eta_k a_k b_k of two one-forms (b defaults to a)"""
    b = a if b is None else b
    if a.degree != 1 or b.degree != 1:
        raise ValueError("ev_g contracts one-forms; degree-2 forms contract to zero on a diagonal metric")
    total = None
    for k in range(sig.n):
        term = float(sig.eta[k]) * product(a[k], b[k])
        total = term if total is None else total + term
    return total


def divergence(xi: Sequence[FourierField]) -> FourierField:
    """sum_i d_i xi^i on the flat torus"""
    total = xi[0].derive(0)
    for i in range(1, len(xi)):
        total = total + xi[i].derive(i)
    return total


def laplacian(sig: Signature, f: FourierField) -> FourierField:
    """sum_j eta_j d_j^2 f"""
    total = None
    for j in range(sig.n):
        term = float(sig.eta[j]) * f.derive(j).derive(j)
        total = term if total is None else total + term
    return total
