"""Norm oracles for the finite-dimensional complex spaces in play.

Coordinate spaces (power-mean, Hilbert, sup) have exact norms.  L_r models
on a k-torus are represented by trigonometric polynomials and integrated on
per-variable uniform grids of size max(8 * max|exponent|, 64) (rounded up
to a power of two), with a half-grid comparison as the reported error; for
r = 2 the grid rule makes the quadrature exact (Parseval).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .bohr import TorusPoint
from .errors import ArityError, DomainError, ResourceError, ShapeError
from .sampling import MODE_EXACT, MODE_QUADRATURE, Estimate

FUNCTION_GRID_FACTOR = 8
FUNCTION_GRID_MIN = 64
FUNCTION_GRID_MAX_POINTS = 1 << 22


@dataclass(frozen=True)
class SequenceSpace:
    """l_r^d; r may be math.inf (then identical to SupSpace)."""

    r: float
    d: int

    def __post_init__(self):
        if not self.r >= 1:
            raise DomainError("sequence space needs r >= 1")
        if self.d < 1:
            raise DomainError("dimension must be >= 1")


@dataclass(frozen=True)
class HilbertSpace:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("dimension must be >= 1")


@dataclass(frozen=True)
class SupSpace:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("dimension must be >= 1")


@dataclass(frozen=True)
class FunctionLr:
    """L_r of the k-torus, restricted to trigonometric polynomials."""

    r: float
    k: int

    def __post_init__(self):
        if not (1 <= self.r < math.inf):
            raise DomainError("function space needs 1 <= r < inf")
        if self.k < 1:
            raise DomainError("torus dimension must be >= 1")


SpaceSpec = Union[SequenceSpace, HilbertSpace, SupSpace, FunctionLr]


class TrigPolynomial:
    """Finite sum c_beta * w^beta over beta in Z^k (exponents any sign)."""

    __slots__ = ("k", "coeffs")

    def __init__(self, coeffs: Mapping[Sequence[int], complex], k: int):
        if k < 1:
            raise DomainError("torus dimension must be >= 1")
        self.k = int(k)
        store: dict[tuple[int, ...], complex] = {}
        for key, c in coeffs.items():
            key = tuple(int(e) for e in (key if isinstance(key, (tuple, list)) else (key,)))
            if len(key) > self.k:
                raise ShapeError(f"exponent {key} has more than {self.k} variables")
            key = key + (0,) * (self.k - len(key))
            c = complex(c)
            if c != 0:
                store[key] = store.get(key, 0) + c
        self.coeffs = {k_: v for k_, v in store.items() if v != 0}

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial) or other.k != self.k:
            return NotImplemented
        merged = dict(self.coeffs)
        for key, c in other.coeffs.items():
            merged[key] = merged.get(key, 0) + c
        return TrigPolynomial(merged, self.k)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "TrigPolynomial":
        return TrigPolynomial({k: scalar * c for k, c in self.coeffs.items()}, self.k)

    __rmul__ = __mul__

    def __neg__(self) -> "TrigPolynomial":
        return (-1) * self

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TrigPolynomial)
            and self.k == other.k
            and self.coeffs == other.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, w: Sequence) -> complex:
        """Pointwise value with exact per-term angle reduction."""
        if len(w) < self.k:
            raise ArityError(f"need {self.k} coordinates, got {len(w)}")
        points = [TorusPoint.coerce(z) for z in w[: self.k]]
        total = 0j
        for beta, c in self.coeffs.items():
            angle = Fraction(0)
            for exp, point in zip(beta, points):
                if exp:
                    angle += point.pow(exp).turns
            total += c * TorusPoint(angle).value()
        return total

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def max_abs_exponents(self) -> tuple[int, ...]:
        if not self.coeffs:
            return (0,) * self.k
        return tuple(
            max(abs(beta[j]) for beta in self.coeffs) for j in range(self.k)
        )


Element = Union[np.ndarray, TrigPolynomial]


def is_coordinate(space: SpaceSpec) -> bool:
    return isinstance(space, (SequenceSpace, HilbertSpace, SupSpace))


def dimension(space: SpaceSpec) -> int:
    return space.d if is_coordinate(space) else space.k


def is_hilbertian(space: SpaceSpec) -> bool:
    """True when the norm comes from an inner product (Parseval applies)."""
    if isinstance(space, HilbertSpace):
        return True
    if isinstance(space, SequenceSpace):
        return space.r == 2 or space.d == 1
    if isinstance(space, SupSpace):
        return space.d == 1
    return space.r == 2


def zero_element(space: SpaceSpec) -> Element:
    if is_coordinate(space):
        return np.zeros(space.d, dtype=np.complex128)
    return TrigPolynomial({}, space.k)


def as_element(space: SpaceSpec, x) -> Element:
    """Coerce x into the representation `space` expects, or raise ShapeError."""
    if is_coordinate(space):
        arr = np.asarray(x, dtype=np.complex128).reshape(-1)
        if arr.shape != (space.d,):
            raise ShapeError(f"expected {space.d} coordinates, got {arr.shape}")
        return arr
    if isinstance(x, TrigPolynomial):
        if x.k != space.k:
            raise ShapeError(f"expected {space.k} torus variables, got {x.k}")
        return x
    if isinstance(x, Mapping):
        return TrigPolynomial(x, space.k)
    raise ShapeError(f"cannot interpret {type(x).__name__} as an L_r element")


def element_is_zero(x: Element) -> bool:
    if isinstance(x, TrigPolynomial):
        return x.is_zero()
    return bool(np.all(x == 0))


def scale_element(x: Element, c: complex) -> Element:
    return c * x if isinstance(x, TrigPolynomial) else np.asarray(x) * c


def add_elements(x: Element, y: Element) -> Element:
    return x + y


def hilbert_norm(space: SpaceSpec, x: Element) -> float:
    """Exact norm for hilbertian spaces (modulus / l2 / Parseval)."""
    if not is_hilbertian(space):
        raise DomainError("space is not hilbertian")
    if isinstance(x, TrigPolynomial):
        return x.l2_norm()
    return float(np.linalg.norm(np.asarray(x)))


def coordinate_norms(space: SpaceSpec, combos: np.ndarray) -> np.ndarray:
    """Column norms of a (d, m) matrix under the space's norm."""
    mags = np.abs(combos)
    if isinstance(space, (HilbertSpace,)) or (
        isinstance(space, SequenceSpace) and space.r == 2
    ):
        return np.sqrt((mags**2).sum(axis=0))
    if isinstance(space, SupSpace) or (
        isinstance(space, SequenceSpace) and space.r == math.inf
    ):
        return mags.max(axis=0)
    r = space.r
    if r == 1:
        return mags.sum(axis=0)
    return (mags**r).sum(axis=0) ** (1.0 / r)


def _function_grid_sizes(max_exponents: Sequence[int], scale: float = 1) -> tuple[int, ...]:
    sizes = []
    for e in max_exponents:
        if e == 0:
            sizes.append(1)  # constant in this variable
            continue
        raw = int(max(FUNCTION_GRID_FACTOR * int(e), FUNCTION_GRID_MIN) * scale)
        sizes.append(1 << (max(raw, 1) - 1).bit_length())
    total = math.prod(sizes)
    if total > FUNCTION_GRID_MAX_POINTS:
        raise ResourceError(
            f"function-space grid of {total} points exceeds budget "
            f"{FUNCTION_GRID_MAX_POINTS}"
        )
    return tuple(sizes)


def _grid_values(polys: Sequence[TrigPolynomial], sizes: Sequence[int]) -> np.ndarray:
    """(grid_points, n_polys) complex values on the tensor grid.

    Exponents reduce mod the per-variable grid size before exponentiation,
    so 2**60-style exponents are evaluated exactly.
    """
    k = polys[0].k
    points = math.prod(sizes)
    out = np.zeros((points, len(polys)), dtype=np.complex128)
    for col, poly in enumerate(polys):
        for beta, c in poly.coeffs.items():
            factors = []
            for j in range(k):
                g = sizes[j]
                e = beta[j] % g
                factors.append(np.exp(2j * math.pi * ((e * np.arange(g)) % g) / g))
            grid = factors[0]
            for f in factors[1:]:
                grid = np.multiply.outer(grid, f)
            out[:, col] += c * grid.reshape(-1)
    return out


class CombinationEvaluator:
    """Batch norms of linear combinations of a fixed family x_1..x_N.

    norms(C) returns the column norms of sum_n C[n, m] * x_n.  Coordinate
    spaces use one (d, N) matrix; function spaces are pre-evaluated on the
    tensor quadrature grid sized for the union support (grid_scale doubles
    it for refinement comparisons).
    """

    def __init__(self, space: SpaceSpec, xs: Sequence[Element], grid_scale: float = 1):
        if len(xs) == 0:
            raise DomainError("need at least one element")
        self.space = space
        self.xs = [as_element(space, x) for x in xs]
        if is_coordinate(space):
            self._matrix = np.column_stack(self.xs)
            self._grid = None
        else:
            union_max = [0] * space.k
            for poly in self.xs:
                for j, e in enumerate(poly.max_abs_exponents()):
                    union_max[j] = max(union_max[j], e)
            sizes = _function_grid_sizes(union_max, grid_scale)
            self._matrix = _grid_values(self.xs, sizes)
            self._grid = sizes

    @property
    def grid_points(self) -> int:
        return 0 if self._grid is None else math.prod(self._grid)

    @property
    def matrix(self) -> np.ndarray:
        """(d, N) coordinate matrix or (grid_points, N) grid values."""
        return self._matrix

    def norms(self, coefficients: np.ndarray) -> np.ndarray:
        c = np.asarray(coefficients, dtype=np.complex128)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[0] != len(self.xs):
            raise ShapeError(
                f"expected {len(self.xs)} coefficient rows, got {c.shape[0]}"
            )
        values = self._matrix @ c
        if self._grid is None:
            return coordinate_norms(self.space, values)
        r = self.space.r
        mags = np.abs(values)
        return (mags**r).mean(axis=0) ** (1.0 / r)


def norm(space: SpaceSpec, x) -> Estimate:
    """Norm oracle; exact for coordinate spaces, quadrature for L_r models."""
    x = as_element(space, x)
    if is_coordinate(space):
        value = float(coordinate_norms(space, np.asarray(x)[:, None])[0])
        return Estimate(value=value, mode=MODE_EXACT)
    if x.is_zero():
        return Estimate(value=0.0, mode=MODE_EXACT)
    one = np.ones((1, 1))
    full = CombinationEvaluator(space, [x], grid_scale=2)
    half = CombinationEvaluator(space, [x], grid_scale=1)
    value = float(full.norms(one)[0])
    rough = float(half.norms(one)[0])
    return Estimate(
        value=value,
        mode=MODE_QUADRATURE,
        quad_error=abs(value - rough),
        samples_used=full.grid_points,
    )


def summing_combination(a: Sequence[complex]) -> tuple[np.ndarray, float]:
    """Assemble sum_n a_n s_n (s_n = e_1 + ... + e_n) in the sup-norm space.

    Coordinate i of the combination is the tail sum a_i + ... + a_m, so the
    norm has the closed form sup_k |sum_{n=k}^m a_n|; the returned value is
    exactly the SupSpace norm of the returned vector.
    """
    a = np.asarray(list(a), dtype=np.complex128)
    if a.size == 0:
        raise DomainError("coefficient vector must be nonempty")
    tails = np.cumsum(a[::-1])[::-1]
    # Same kernel as norm() so the closed form matches it bit for bit.
    value = float(coordinate_norms(SupSpace(a.size), tails[:, None])[0])
    return tails, value


def trig_eval(x: TrigPolynomial, w: Sequence) -> complex:
    """Value of a trigonometric polynomial at a torus point."""
    return x.evaluate(w)
