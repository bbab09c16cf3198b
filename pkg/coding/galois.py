"""
Arithmetic over GF(2^M) and the matrix algebra used by network coding.

Addition is XOR. Multiplication goes through log/antilog tables built once per
field; `clmul_reference` is a table-free carry-less multiply kept as an
independent oracle for the tables.

Elements are plain integers in [0, 2^M). Bulk operations take and return numpy
integer arrays so that whole coefficient vectors and payload blocks are
processed at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

# Reduction polynomials (bit i = coefficient of x^i). Degree 8 is x^8+x^4+x^3+x+1.
DEFAULT_POLYNOMIALS: dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}
DEFAULT_DEGREE = 8


class FieldMismatchError(ValueError):
    """Operands belong to fields of different order."""


class SingularMatrixError(ValueError):
    """A linear system has no unique solution."""


# ============================================================================
# TABLE-FREE ORACLE
# ============================================================================

def clmul_reference(a, b, *, degree: int = DEFAULT_DEGREE, polynomial: int | None = None) -> np.ndarray:
    """
    Multiply by shift-and-add (peasant multiplication) with modular reduction.

    Works elementwise on arrays and never touches the log tables.

    Examples:
        >>> int(clmul_reference(0x02, 0x80))
        27
        >>> int(clmul_reference(0x57, 0x83))
        193
    """
    poly = DEFAULT_POLYNOMIALS[degree] if polynomial is None else polynomial
    a = np.array(a, dtype=np.int64, copy=True)
    b = np.array(b, dtype=np.int64, copy=True)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    result = np.zeros_like(a)
    top = 1 << degree
    for _ in range(degree):
        result ^= np.where(b & 1, a, 0)
        b >>= 1
        a <<= 1
        a = np.where(a & top, a ^ poly, a)
    return result


def _mul_scalar(a: int, b: int, degree: int, polynomial: int) -> int:
    result = 0
    top = 1 << degree
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= polynomial
    return result


# ============================================================================
# FIELD
# ============================================================================

class GaloisField:
    """
    GF(2^M) with immutable exp/log tables.

    Attributes:
        degree: M
        order: 2^M
        polynomial: reduction polynomial as an integer bit mask
        generator: primitive element used to build the tables
    """

    def __init__(self, degree: int = DEFAULT_DEGREE, polynomial: int | None = None):
        if degree not in DEFAULT_POLYNOMIALS and polynomial is None:
            raise ValueError(f"No default reduction polynomial for degree {degree}")
        if not 1 < degree <= 16:
            raise ValueError(f"Field degree must be in [2, 16], got {degree}")

        self.degree = degree
        self.order = 1 << degree
        self.polynomial = DEFAULT_POLYNOMIALS[degree] if polynomial is None else polynomial
        if self.polynomial >> degree != 1:
            raise ValueError(
                f"Polynomial {self.polynomial:#x} does not have degree {degree}"
            )

        self.generator, exp, log = self._build_tables()
        exp.flags.writeable = False
        log.flags.writeable = False
        self._exp = exp
        self._log = log

    @classmethod
    def get(cls, degree: int = DEFAULT_DEGREE) -> "GaloisField":
        """Shared instance for a degree with its default polynomial."""
        return _cached_field(degree)

    def _build_tables(self) -> tuple[int, np.ndarray, np.ndarray]:
        n = self.order - 1
        for candidate in range(2, self.order):
            powers = np.empty(n, dtype=np.int64)
            value = 1
            for i in range(n):
                powers[i] = value
                value = _mul_scalar(value, candidate, self.degree, self.polynomial)
            if value == 1 and np.unique(powers).size == n:
                exp = np.concatenate([powers, powers])
                log = np.zeros(self.order, dtype=np.int64)
                log[powers] = np.arange(n)
                return candidate, exp, log
        raise ValueError(f"Polynomial {self.polynomial:#x} is not irreducible over GF(2)")

    def corrupted(self, index: int = 7) -> "GaloisField":
        """
        Copy of this field with one antilog entry flipped.

        Fault-injection hook for the validation suites; never use it for coding.
        """
        clone = object.__new__(GaloisField)
        clone.degree = self.degree
        clone.order = self.order
        clone.polynomial = self.polynomial
        clone.generator = self.generator
        exp = self._exp.copy()
        exp[index % (self.order - 1)] ^= 1
        exp.flags.writeable = False
        clone._exp = exp
        clone._log = self._log
        return clone

    # ------------------------------------------------------------------#
    # Vectorized arithmetic
    # ------------------------------------------------------------------#
    def add(self, a, b) -> np.ndarray:
        return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        product = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("Zero has no multiplicative inverse in GF(2^M)")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def random(self, rng: np.random.Generator, size=None, *, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=size, dtype=np.int64)

    def contains(self, values) -> bool:
        values = np.asarray(values)
        return bool(np.all((values >= 0) & (values < self.order)))

    def __repr__(self) -> str:
        return f"GaloisField(degree={self.degree}, polynomial={self.polynomial:#x})"


@lru_cache(maxsize=None)
def _cached_field(degree: int) -> GaloisField:
    return GaloisField(degree)


# ============================================================================
# ELEMENTS
# ============================================================================

@dataclass(frozen=True)
class GfElement:
    """A single field element; `degree` identifies the field GF(2^degree)."""

    value: int
    degree: int = DEFAULT_DEGREE

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.degree):
            raise ValueError(f"Value {self.value} outside GF(2^{self.degree})")

    @property
    def field(self) -> GaloisField:
        return GaloisField.get(self.degree)

    def __add__(self, other: "GfElement") -> "GfElement":
        return gf_add(self, other)

    def __mul__(self, other: "GfElement") -> "GfElement":
        return gf_mul(self, other)

    def inverse(self) -> "GfElement":
        return gf_inv(self)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        width = (self.degree + 3) // 4
        return f"GfElement(0x{self.value:0{width}X}, M={self.degree})"


def _check_same_field(a: GfElement, b: GfElement) -> None:
    if a.degree != b.degree:
        raise FieldMismatchError(f"GF(2^{a.degree}) and GF(2^{b.degree}) elements cannot be combined")


def gf_add(a: GfElement, b: GfElement) -> GfElement:
    _check_same_field(a, b)
    return GfElement(a.value ^ b.value, a.degree)


def gf_mul(a: GfElement, b: GfElement) -> GfElement:
    _check_same_field(a, b)
    return GfElement(int(a.field.mul(a.value, b.value)), a.degree)


def gf_inv(a: GfElement) -> GfElement:
    if a.value == 0:
        raise ZeroDivisionError("Zero has no multiplicative inverse in GF(2^M)")
    return GfElement(int(a.field.inv(a.value)), a.degree)


# ============================================================================
# MATRICES
# ============================================================================

def _row_reduce(field: GaloisField, block: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination on the first `ncols` columns of a copy of `block`."""
    a = np.array(block, dtype=np.int64, copy=True)
    rows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == rows:
            break
        candidates = np.flatnonzero(a[r:, col])
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = field.mul(a[r], field.inv(a[r, col]))
        others = np.flatnonzero(a[:, col])
        others = others[others != r]
        if others.size:
            a[others] ^= field.mul(a[others, col][:, None], a[r][None, :])
        pivots.append(col)
        r += 1
    return a, pivots


@dataclass(frozen=True, eq=False)
class GfMatrix:
    """A rows x cols matrix over a Galois field, backed by an int64 array."""

    entries: np.ndarray
    field: GaloisField

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int64, copy=True)
        if entries.ndim != 2:
            raise ValueError(f"GfMatrix needs a 2-D array, got shape {entries.shape}")
        if not self.field.contains(entries):
            raise ValueError(f"Entries outside GF(2^{self.field.degree})")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], field: GaloisField | None = None) -> "GfMatrix":
        return cls(np.array([list(r) for r in rows], dtype=np.int64), field or GaloisField.get())

    @classmethod
    def identity(cls, n: int, field: GaloisField | None = None) -> "GfMatrix":
        return cls(np.eye(n, dtype=np.int64), field or GaloisField.get())

    @classmethod
    def random(cls, rng: np.random.Generator, rows: int, cols: int, field: GaloisField | None = None) -> "GfMatrix":
        field = field or GaloisField.get()
        return cls(field.random(rng, (rows, cols)), field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def element(self, i: int, j: int) -> GfElement:
        return GfElement(int(self.entries[i, j]), self.field.degree)

    def matmul(self, other) -> np.ndarray:
        """Product with a vector (length cols) or matrix (cols x L)."""
        return matmul(self.field, self.entries, other.entries if isinstance(other, GfMatrix) else other)

    def __matmul__(self, other) -> np.ndarray:
        return self.matmul(other)

    def swap_rows(self, i: int, j: int) -> "GfMatrix":
        entries = self.entries.copy()
        entries[[i, j]] = entries[[j, i]]
        return GfMatrix(entries, self.field)

    def scale_row(self, i: int, factor: int) -> "GfMatrix":
        if factor == 0:
            raise ValueError("Row scaling needs a nonzero factor")
        entries = self.entries.copy()
        entries[i] = self.field.mul(entries[i], factor)
        return GfMatrix(entries, self.field)

    def rank(self) -> int:
        return rank(self)

    def solve(self, y) -> np.ndarray:
        return solve(self, y)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GfMatrix):
            return NotImplemented
        return self.field.degree == other.field.degree and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"GfMatrix({self.rows}x{self.cols}, M={self.field.degree})"


def matmul(field: GaloisField, c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """XOR-accumulated product c @ x over the field; x may be a vector or a matrix."""
    c = np.asarray(c, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    vector = x.ndim == 1
    if vector:
        x = x[:, None]
    if c.shape[1] != x.shape[0]:
        raise ValueError(f"Shape mismatch: {c.shape} @ {x.shape}")
    products = field.mul(c[:, :, None], x[None, :, :])
    out = np.bitwise_xor.reduce(products, axis=1) if c.shape[1] else np.zeros((c.shape[0], x.shape[1]), np.int64)
    return out[:, 0] if vector else out


def rank(m: GfMatrix) -> int:
    """Number of pivots after row reduction."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _row_reduce(m.field, m.entries, m.cols)
    return len(pivots)


def solve(c: GfMatrix, y) -> np.ndarray:
    """
    Solve c·x = y by Gauss-Jordan elimination.

    `c` may be tall (more equations than unknowns) as long as it has full
    column rank and the system is consistent. `y` is a vector of length
    `c.rows` or a block with `c.rows` rows (one payload per row).

    Raises:
        SingularMatrixError: rank-deficient or inconsistent system
    """
    field = c.field
    y = np.asarray(y, dtype=np.int64)
    vector = y.ndim == 1
    rhs = y[:, None] if vector else y
    if rhs.shape[0] != c.rows:
        raise ValueError(f"Right-hand side has {rhs.shape[0]} rows, matrix has {c.rows}")

    n = c.cols
    reduced, pivots = _row_reduce(field, np.hstack([c.entries, rhs]), n)
    if len(pivots) < n:
        raise SingularMatrixError(f"Matrix has rank {len(pivots)} < {n} unknowns")
    if np.any(reduced[n:, n:]):
        raise SingularMatrixError("Inconsistent overdetermined system")

    x = reduced[:n, n:]
    return x[:, 0] if vector else x


def full_rank_bound(num_coefficients: int, num_links: int, degree: int = DEFAULT_DEGREE) -> float:
    """
    Lower bound on the probability that random coding yields full-rank
    decoding matrices: (1 - |D| / 2^M) ** |E|.
    """
    if num_coefficients < 0 or num_links < 0:
        raise ValueError("Counts must be nonnegative")
    return max(0.0, 1.0 - num_coefficients / float(1 << degree)) ** num_links
